#include <cmath>
#include <stdexcept>

#include <doctest.h>
#include <Eigen/Dense>

#include "vheat/bath.hpp"
#include "vheat/local_basis.hpp"
#include "vheat/redfield.hpp"
#include "vheat/vmodel.hpp"

using namespace vheat;

namespace {

const double kSqrt2 = std::sqrt(2.0);

VModelParams params_with(double alpha, double delta = 1e-4) {
    VModelParams p;
    p.alpha = alpha;
    p.delta = delta;
    return p;
}

}  // namespace

TEST_SUITE("local_basis") {

TEST_CASE("change-of-basis matrix is a symmetric orthogonal involution") {
    const Eigen::Matrix3d u = local_unitary();
    CHECK((u * u.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((u * u - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((u - u.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(u.determinant() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(u(0, 0) == 1.0);
}

TEST_CASE("site Hamiltonian shows the direct inter-site exchange") {
    const VModelParams p = params_with(0.5, 1e-3);
    const LocalPicture local = to_local(p);

    Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
    expected(1, 1) = p.nu - 0.5 * p.delta;
    expected(2, 2) = p.nu - 0.5 * p.delta;
    expected(1, 2) = 0.5 * p.delta;
    expected(2, 1) = 0.5 * p.delta;
    CHECK((local.h_local - expected).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eigs(local.h_local);
    CHECK(eigs.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eigs.eigenvalues()(1) == doctest::Approx(p.nu - p.delta).epsilon(1e-12));
    CHECK(eigs.eigenvalues()(2) == doctest::Approx(p.nu).epsilon(1e-12));
    CHECK(local.h_local.trace() ==
          doctest::Approx(2.0 * p.nu - p.delta).epsilon(1e-15));
}

TEST_CASE("hot bath attaches to one site only") {
    const LocalPicture local = to_local(params_with(0.5));
    CHECK(local.s_h_local(0, 2) == doctest::Approx(kSqrt2).epsilon(1e-15));
    CHECK(std::abs(local.s_h_local(0, 1)) < 1e-15);
    CHECK(std::abs(local.s_h_local(1, 2)) < 1e-15);
    CHECK(local.s_h_local(2, 0) == doctest::Approx(kSqrt2).epsilon(1e-15));
}

TEST_CASE("cold bath position tracks the coupling ratio") {
    // ratio +1: both baths on the same site (side-coupled second site)
    const LocalPicture same = to_local(params_with(1.0));
    CHECK(same.s_c_local(0, 2) == doctest::Approx(kSqrt2).epsilon(1e-14));
    CHECK(std::abs(same.s_c_local(0, 1)) < 1e-15);

    // ratio -1: baths on opposite ends of a two-site chain
    const LocalPicture serial = to_local(params_with(-1.0));
    CHECK(std::abs(serial.s_c_local(0, 2)) < 1e-15);
    CHECK(serial.s_c_local(0, 1) == doctest::Approx(-1.41421356237309).epsilon(1e-12));

    // generic ratio splits between the two sites
    const LocalPicture mixed = to_local(params_with(0.3));
    CHECK(mixed.s_c_local(0, 2) == doctest::Approx(1.3 / kSqrt2).epsilon(1e-14));
    CHECK(mixed.s_c_local(0, 1) == doctest::Approx(-0.7 / kSqrt2).epsilon(1e-14));
}

TEST_CASE("conjugation preserves norms and undoes itself") {
    const VModelParams p = params_with(-0.4);
    const VModel model = build_vmodel(p);
    const LocalPicture local = to_local(p);
    const Eigen::Matrix3d u = local_unitary();

    const Eigen::Matrix3d back_h = u * local.h_local * u.transpose();
    CHECK((back_h - model.system.hamiltonian().real()).cwiseAbs().maxCoeff() < 1e-15);

    CHECK(local.s_h_local.norm() ==
          doctest::Approx(model.hot.coupling_op.norm()).epsilon(1e-14));
    CHECK(local.s_c_local.norm() ==
          doctest::Approx(model.cold.coupling_op.norm()).epsilon(1e-14));
    CHECK(local.s_c_local.norm() ==
          doctest::Approx(std::sqrt(2.0 * (1.0 + 0.4 * 0.4))).epsilon(1e-14));
}

TEST_CASE("two-level reduction reproduces the bath occupancy") {
    const double nu = 1.0;
    const double temperature = 4.0;
    const double gamma = 0.0071;
    const SingleBathReduction red = single_bath_mapping(nu, temperature, gamma);

    const double gamma_sp = 2.0 * spectral_density(nu, gamma);
    const double n = bose_occupation(nu, temperature);
    CHECK(red.spontaneous_rate == doctest::Approx(gamma_sp).epsilon(1e-14));
    CHECK(red.pump_rate == doctest::Approx(gamma_sp * n).epsilon(1e-13));
    CHECK(red.total_rate == doctest::Approx(red.spontaneous_rate + red.pump_rate)
                                .epsilon(1e-14));
    CHECK(red.phi == doctest::Approx(red.total_rate + 2.0 * red.pump_rate).epsilon(1e-13));

    const double boltz = std::exp(-nu / temperature);
    CHECK(red.steady_p() == doctest::Approx(boltz / (1.0 + 2.0 * boltz)).epsilon(1e-14));

    CHECK_THROWS_AS(single_bath_mapping(nu, temperature, 0.0), std::domain_error);
    CHECK_THROWS_AS(single_bath_mapping(-1.0, temperature, gamma), std::invalid_argument);
    CHECK_THROWS_AS(single_bath_mapping(nu, 0.0, gamma), std::invalid_argument);
}

TEST_CASE("symmetric-point reduction adds the two bath channels") {
    const VModelParams p = params_with(1.0);
    const EffectiveSingleBath eff = alpha_one_mapping(p);
    const SingleBathReduction hot = single_bath_mapping(p.nu, p.t_hot, p.gamma);
    const SingleBathReduction cold = single_bath_mapping(p.nu, p.t_cold, p.gamma);
    CHECK(eff.k_eff == doctest::Approx(hot.total_rate + cold.total_rate).epsilon(1e-15));
    CHECK(eff.phi_eff == doctest::Approx(hot.phi + cold.phi).epsilon(1e-15));
    CHECK(eff.steady_p() == doctest::Approx(0.294544139358025).epsilon(1e-10));

    CHECK_THROWS_AS(alpha_one_mapping(params_with(0.9)), std::invalid_argument);
    VModelParams uncoupled = params_with(1.0);
    uncoupled.gamma = 0.0;
    CHECK_THROWS_AS(alpha_one_mapping(uncoupled), std::domain_error);
}

TEST_CASE("equal temperatures collapse the pair of channels to one") {
    VModelParams p = params_with(1.0);
    p.t_hot = 3.0;
    p.t_cold = 3.0;
    const EffectiveSingleBath eff = alpha_one_mapping(p);
    const SingleBathReduction single = single_bath_mapping(p.nu, 3.0, p.gamma);
    CHECK(eff.steady_p() == doctest::Approx(single.steady_p()).epsilon(1e-15));
}

TEST_CASE("full solver confirms the reduced occupancy at the symmetric point") {
    const VModelParams p = params_with(1.0);
    const VModel model = build_vmodel(p);
    const RedfieldGenerator gen =
        build_generator(model.system, model.baths(), GeneratorMode::nonsecular);
    const Eigen::MatrixXcd ss = steady_state(gen);
    const double target = alpha_one_mapping(p).steady_p();
    CHECK(std::abs(ss(1, 1).real() - target) < 1e-5);
    CHECK(std::abs(ss(2, 2).real() - target) < 1e-5);
}

}  // TEST_SUITE
