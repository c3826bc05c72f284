#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "vheat/bath.hpp"
#include "vheat/redfield.hpp"
#include "vheat/vmodel.hpp"

using namespace vheat;

namespace {

RedfieldGenerator vgen(double alpha, GeneratorMode mode = GeneratorMode::nonsecular,
                       double delta = 1e-4, double t_hot = 4.0, double t_cold = 2.0) {
    VModelParams p;
    p.alpha = alpha;
    p.delta = delta;
    p.t_hot = t_hot;
    p.t_cold = t_cold;
    const VModel model = build_vmodel(p);
    return build_generator(model.system, model.baths(), mode);
}

// Random Hermitian trace-1 matrix (not necessarily positive).
Eigen::MatrixXcd random_hermitian_state(std::mt19937& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (int a = 0; a < dim; ++a) {
        for (int b = a; b < dim; ++b) {
            if (a == b) {
                m(a, a) = u(rng);
            } else {
                m(a, b) = complex(u(rng), u(rng));
                m(b, a) = std::conj(m(a, b));
            }
        }
    }
    const complex tr = m.trace();
    m -= (tr - 1.0) / static_cast<double>(dim) * Eigen::MatrixXcd::Identity(dim, dim);
    return m;
}

Eigen::MatrixXcd gibbs_state(const EnergyBasisSystem& system, double temperature) {
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(system.dim, system.dim);
    double z = 0.0;
    for (int a = 0; a < system.dim; ++a) {
        const double w = std::exp(-system.energies[static_cast<std::size_t>(a)] / temperature);
        sigma(a, a) = w;
        z += w;
    }
    return sigma / z;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("redfield") {

TEST_CASE("generator has one real finite dissipator per bath") {
    const RedfieldGenerator gen = vgen(0.5);
    REQUIRE(gen.dissipators.size() == 2);
    for (const Eigen::MatrixXd& d : gen.dissipators) {
        CHECK(d.rows() == 9);
        CHECK(d.cols() == 9);
        CHECK(d.allFinite());
    }
    CHECK(gen.dim() == 3);
}

TEST_CASE("generator rejects mismatched coupling dimensions") {
    const EnergyBasisSystem system(3, {0.0, 0.5, 1.0});
    const OhmicBath bad("hot", 2.0, 0.1, Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(build_generator(system, {bad}, GeneratorMode::nonsecular),
                    std::invalid_argument);
}

TEST_CASE("right-hand side preserves trace and hermiticity") {
    std::mt19937 rng(2024);
    for (double alpha : {-1.0, 0.3, 1.0}) {
        const RedfieldGenerator gen = vgen(alpha);
        for (int i = 0; i < 20; ++i) {
            const Eigen::MatrixXcd state = random_hermitian_state(rng, 3);
            const Eigen::MatrixXcd dstate = apply_rhs(gen, state);
            CHECK(std::abs(dstate.trace()) < 1e-14);
            CHECK(max_abs(dstate - dstate.adjoint()) < 1e-14);
        }
    }
}

TEST_CASE("zero coupling leaves only the unitary rotation") {
    VModelParams p;
    p.alpha = 0.7;
    p.gamma = 0.0;
    const VModel model = build_vmodel(p);
    const RedfieldGenerator gen =
        build_generator(model.system, model.baths(), GeneratorMode::nonsecular);

    std::mt19937 rng(7);
    const Eigen::MatrixXcd state = random_hermitian_state(rng, 3);
    CHECK(max_abs(apply_rhs(gen, state) - apply_unitary(gen, state)) == 0.0);

    // coherence between ground and upper level rotates at the Bohr frequency
    Eigen::MatrixXcd sigma0 = Eigen::MatrixXcd::Zero(3, 3);
    sigma0(0, 0) = 0.5;
    sigma0(2, 2) = 0.5;
    sigma0(2, 0) = 0.5;
    sigma0(0, 2) = 0.5;
    const double t = 2.3;
    const Trajectory traj = integrate_at(gen, sigma0, {0.0, t});
    const complex expected = 0.5 * std::exp(complex(0.0, -model.system.bohr(2, 0) * t));
    CHECK(std::abs(traj.states.back()(2, 0) - expected) < 1e-8);

    CHECK_THROWS_AS(steady_state(gen), std::invalid_argument);
}

TEST_CASE("ground-state feeding rates match the bath absorption rates") {
    VModelParams p;
    p.alpha = 0.5;
    const VModel model = build_vmodel(p);
    const RedfieldGenerator gen =
        build_generator(model.system, model.baths(), GeneratorMode::nonsecular);
    const Eigen::MatrixXcd dstate = apply_rhs(gen, ground_state_density(3));
    const double w21 = p.nu - p.delta;
    const double expect22 =
        transition_rate(-w21, model.hot) + transition_rate(-w21, model.cold);
    CHECK(dstate(1, 1).real() == doctest::Approx(expect22).epsilon(1e-12));
    const double expect33 = transition_rate(-p.nu, model.hot) +
                            p.alpha * p.alpha * transition_rate(-p.nu, model.cold);
    CHECK(dstate(2, 2).real() == doctest::Approx(expect33).epsilon(1e-12));

    // hot-bath heat uptake from the ground state: photon energy times rate
    const Eigen::MatrixXcd hot_flow = apply_dissipator(gen, 0, ground_state_density(3));
    const double j_h = heat_current(gen, 0, ground_state_density(3));
    CHECK(j_h == doctest::Approx(w21 * transition_rate(-w21, model.hot) +
                                 p.nu * transition_rate(-p.nu, model.hot))
                     .epsilon(1e-12));
    CHECK(hot_flow(0, 0).real() < 0.0);  // ground population drains
}

TEST_CASE("thermal state is a fixed point at equal temperatures") {
    for (double temperature : {1.0, 2.0, 4.0}) {
        const RedfieldGenerator gen =
            vgen(0.8, GeneratorMode::nonsecular, 1e-4, temperature, temperature);
        const Eigen::MatrixXcd gibbs = gibbs_state(gen.system, temperature);
        CHECK(max_abs(apply_rhs(gen, gibbs)) < 1e-12);
        CHECK(max_abs(steady_state(gen) - gibbs) < 1e-10);
    }
}

TEST_CASE("steady state reproduces reference points") {
    const RedfieldGenerator gen_m = vgen(-1.0);
    const Eigen::MatrixXcd ss_m = steady_state(gen_m);
    CHECK(ss_m(2, 1).real() == doctest::Approx(0.036108757052719).epsilon(1e-9));
    CHECK(std::abs(ss_m.trace() - complex(1.0)) < 1e-13);

    const RedfieldGenerator gen_1 = vgen(1.0);
    const Eigen::MatrixXcd ss_1 = steady_state(gen_1);
    CHECK(heat_current(gen_1, 0, ss_1) ==
          doctest::Approx(0.00327033366321714).epsilon(1e-9));
    CHECK(std::abs(ss_1(2, 1)) < 1e-12);  // interference-free point: no coherence
}

TEST_CASE("transient relaxes onto the directly solved steady state") {
    struct Case {
        double alpha;
        double t_end;
    };
    for (const Case c : {Case{-1.0, 1e5}, Case{-0.5, 1e5}, Case{0.5, 1e5}, Case{1.2, 2e5}}) {
        const RedfieldGenerator gen = vgen(c.alpha);
        const Trajectory traj = integrate(gen, ground_state_density(3), c.t_end, 9);
        CHECK(max_abs(traj.states.back() - steady_state(gen)) < 1e-6);
    }
}

TEST_CASE("secular generator closes over populations and damps coherence independently") {
    const RedfieldGenerator gen = vgen(0.6, GeneratorMode::secular);
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(3, 3);
    diag(0, 0) = 0.5;
    diag(1, 1) = 0.3;
    diag(2, 2) = 0.2;
    const Eigen::MatrixXcd ddiag = apply_rhs(gen, diag);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) CHECK(std::abs(ddiag(a, b)) < 1e-16);

    // an excited-excited coherence only decays and rotates, no population feed
    Eigen::MatrixXcd coh = Eigen::MatrixXcd::Zero(3, 3);
    coh(2, 1) = complex(0.1, -0.05);
    coh(1, 2) = std::conj(coh(2, 1));
    const Eigen::MatrixXcd dcoh = apply_rhs(gen, coh);
    const VModel model = build_vmodel([] {
        VModelParams p;
        p.alpha = 0.6;
        return p;
    }());
    const double xi_exact =
        0.5 * (transition_rate(model.system.bohr(2, 0), model.hot) +
               transition_rate(model.system.bohr(1, 0), model.hot) +
               0.6 * 0.6 * transition_rate(model.system.bohr(2, 0), model.cold) +
               transition_rate(model.system.bohr(1, 0), model.cold));
    const complex expected = (complex(0.0, -model.system.bohr(2, 1)) - xi_exact) * coh(2, 1);
    CHECK(std::abs(dcoh(2, 1) - expected) < 1e-14);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(dcoh(a, a)) < 1e-16);
}

TEST_CASE("secular construction is refused for degenerate excited levels") {
    CHECK_THROWS_AS(vgen(1.0, GeneratorMode::secular, 0.0), std::invalid_argument);
    CHECK_NOTHROW(vgen(1.0, GeneratorMode::nonsecular, 0.0));
}

TEST_CASE("integration handles a zero-length horizon") {
    const RedfieldGenerator gen = vgen(0.5);
    const Trajectory traj = integrate(gen, ground_state_density(3), 0.0, 1);
    REQUIRE(traj.times.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK(max_abs(traj.states[0] - ground_state_density(3)) == 0.0);
    REQUIRE(traj.bath_currents.size() == 2);
    CHECK(traj.bath_currents[0].size() == 1);
}

TEST_CASE("integration failures carry the last good time") {
    const RedfieldGenerator gen = vgen(0.5);
    IntegrateOptions hopeless;
    hopeless.rtol = 1e-300;
    hopeless.atol = 1e-300;
    CHECK_THROWS_AS(integrate(gen, ground_state_density(3), 10.0, 3, hopeless),
                    IntegrationError);

    IntegrateOptions tiny_budget;
    tiny_budget.max_steps = 3;
    try {
        integrate(gen, ground_state_density(3), 1e6, 3, tiny_budget);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& err) {
        CHECK(err.last_good_time >= 0.0);
        CHECK(err.last_good_time < 1e6);
    }
}

TEST_CASE("integration validates its inputs") {
    const RedfieldGenerator gen = vgen(0.5);
    const Eigen::MatrixXcd ok = ground_state_density(3);
    CHECK_THROWS_AS(integrate_at(gen, ok, {}), std::invalid_argument);
    CHECK_THROWS_AS(integrate_at(gen, ok, {-1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(integrate_at(gen, ok, {0.0, 2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(integrate(gen, ok, -1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(integrate(gen, ok, 1.0, 1), std::invalid_argument);

    Eigen::MatrixXcd traceless = ok;
    traceless(0, 0) = 0.5;
    CHECK_THROWS_AS(integrate_at(gen, traceless, {0.0, 1.0}), std::invalid_argument);
    Eigen::MatrixXcd skew = ok;
    skew(0, 1) = complex(0.0, 0.3);
    CHECK_THROWS_AS(integrate_at(gen, skew, {0.0, 1.0}), std::invalid_argument);

    IntegrateOptions bad;
    bad.rtol = 0.0;
    CHECK_THROWS_AS(integrate_at(gen, ok, {0.0, 1.0}, bad), std::invalid_argument);
}

TEST_CASE("stacked real representation agrees with the complex right-hand side") {
    std::mt19937 rng(99);
    const RedfieldGenerator gen = vgen(-0.4);
    const Eigen::MatrixXd full = real_superoperator(gen);
    REQUIRE(full.rows() == 18);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXcd state = random_hermitian_state(rng, 3);
        const Eigen::MatrixXcd dstate = apply_rhs(gen, state);
        Eigen::VectorXd x(18);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                x(a * 3 + b) = state(a, b).real();
                x(9 + a * 3 + b) = state(a, b).imag();
            }
        const Eigen::VectorXd dx = full * x;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                CHECK(dx(a * 3 + b) == doctest::Approx(dstate(a, b).real()).epsilon(1e-13));
                CHECK(dx(9 + a * 3 + b) ==
                      doctest::Approx(dstate(a, b).imag()).epsilon(1e-13));
            }
    }
}

TEST_CASE("entropy production vanishes in equilibrium and is positive out of it") {
    const RedfieldGenerator eq = vgen(0.8, GeneratorMode::nonsecular, 1e-4, 3.0, 3.0);
    CHECK(std::abs(entropy_production_rate(eq, gibbs_state(eq.system, 3.0))) < 1e-10);

    const RedfieldGenerator gen = vgen(0.5);
    const Eigen::MatrixXcd ss = steady_state(gen);
    const double rate = entropy_production_rate(gen, ss);
    const double j_h = heat_current(gen, 0, ss);
    CHECK(rate > 0.0);
    CHECK(rate == doctest::Approx(j_h * (1.0 / 2.0 - 1.0 / 4.0)).epsilon(1e-10));
}

TEST_CASE("entropy production rejects states with negative eigenvalues") {
    const RedfieldGenerator gen = vgen(0.5);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(3, 3);
    bad(0, 0) = 1.2;
    bad(1, 1) = -0.1;
    bad(2, 2) = -0.1;
    CHECK_THROWS_AS(entropy_production_rate(gen, bad), NumericalError);
}

TEST_CASE("density-matrix eigenvalues come back ascending") {
    Eigen::MatrixXcd state = Eigen::MatrixXcd::Zero(3, 3);
    state(0, 0) = 0.2;
    state(1, 1) = 0.5;
    state(2, 2) = 0.3;
    const std::vector<double> eigs = rdm_eigenvalues(state);
    REQUIRE(eigs.size() == 3);
    CHECK(eigs[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(eigs[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(eigs[2] == doctest::Approx(0.5).epsilon(1e-14));

    Eigen::MatrixXcd not_hermitian = state;
    not_hermitian(0, 1) = 0.5;
    CHECK_THROWS_AS(rdm_eigenvalues(not_hermitian), std::invalid_argument);
    CHECK_THROWS_AS(rdm_eigenvalues(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("scaling the dissipators negates only the irreversible part") {
    const RedfieldGenerator gen = vgen(0.5);
    const RedfieldGenerator flipped = with_scaled_dissipators(gen, -1.0);
    std::mt19937 rng(5);
    const Eigen::MatrixXcd state = random_hermitian_state(rng, 3);
    CHECK(max_abs(apply_dissipator(flipped, 0, state) + apply_dissipator(gen, 0, state)) ==
          0.0);
    CHECK(max_abs(apply_dissipator(flipped, 1, state) + apply_dissipator(gen, 1, state)) ==
          0.0);
    CHECK(max_abs(apply_unitary(flipped, state) - apply_unitary(gen, state)) == 0.0);
}

TEST_CASE("bath index bounds are enforced") {
    const RedfieldGenerator gen = vgen(0.5);
    CHECK_THROWS_AS(heat_current(gen, 2, ground_state_density(3)), std::invalid_argument);
    CHECK_THROWS_AS(apply_dissipator(gen, 9, ground_state_density(3)),
                    std::invalid_argument);
}

}  // TEST_SUITE
