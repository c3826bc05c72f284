#include "vheat/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vheat/bath.hpp"

namespace vheat {

namespace {

// Row-major vectorization: vec(sigma)[a*d + b] = sigma(a, b).
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
    const int d = static_cast<int>(m.rows());
    Eigen::VectorXcd v(d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) v(a * d + b) = m(a, b);
    return v;
}

Eigen::MatrixXcd devectorize(const Eigen::VectorXcd& v, int d) {
    Eigen::MatrixXcd m(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) m(a, b) = v(a * d + b);
    return m;
}

// One bath's dissipator as a real superoperator on vec(sigma):
//   (d sigma/dt)_{ab} =
//     - sum_{c,d'} S_ac S_cd' k(w_d'c)/2 sigma_d'b      (left decay chain)
//     - sum_{e,c}  S_be S_ec k(w_ce)/2  sigma_ac        (right decay chain)
//     + sum_{c,d'} [S_d'b S_ac k(w_ca) + S_ca S_bd' k(w_d'b)]/2 sigma_cd'
// with all rate factors real, so the superoperator is real.
Eigen::MatrixXd dissipator_superoperator(const EnergyBasisSystem& system,
                                         const OhmicBath& bath) {
    const int d = system.dim;
    Eigen::MatrixXd K(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) K(i, j) = transition_rate(system.bohr(i, j), bath);

    const Eigen::MatrixXd& S = bath.coupling_op;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const int row = a * d + b;
            for (int dd = 0; dd < d; ++dd) {
                double coef = 0.0;
                for (int c = 0; c < d; ++c) coef += S(a, c) * S(c, dd) * K(dd, c);
                L(row, dd * d + b) -= 0.5 * coef;
            }
            for (int c = 0; c < d; ++c) {
                double coef = 0.0;
                for (int e = 0; e < d; ++e) coef += S(b, e) * S(e, c) * K(c, e);
                L(row, a * d + c) -= 0.5 * coef;
            }
            for (int c = 0; c < d; ++c) {
                for (int dd = 0; dd < d; ++dd) {
                    L(row, c * d + dd) +=
                        0.5 * (S(dd, b) * S(a, c) * K(c, a) + S(c, a) * S(b, dd) * K(dd, b));
                }
            }
        }
    }
    return L;
}

constexpr double kSecularTol = 1e-9;

// Keep only terms whose source and target elements oscillate at the same Bohr
// frequency. Refuses outright when two distinct levels are degenerate, since
// the grouping would then mix populations with a coherence.
Eigen::MatrixXd secular_mask(const EnergyBasisSystem& system) {
    const int d = system.dim;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (a != b) {
                const double w = system.bohr(a, b);
                if (std::abs(w) < kSecularTol * std::max(1.0, std::abs(w))) {
                    throw std::invalid_argument(
                        "build_generator: secular mode refused, distinct levels are "
                        "degenerate at the grouping tolerance (split the levels or use "
                        "nonsecular mode)");
                }
            }
        }
    }
    Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int dd = 0; dd < d; ++dd) {
                    const double wab = system.bohr(a, b);
                    const double wcd = system.bohr(c, dd);
                    if (std::abs(wab - wcd) < kSecularTol * std::max(1.0, std::abs(wab))) {
                        mask(a * d + b, c * d + dd) = 1.0;
                    }
                }
    return mask;
}

// Hermitian parametrization used by the steady-state solve: d real diagonal
// entries, then Re of each upper off-diagonal, then Im of each.
std::vector<Eigen::MatrixXcd> hermitian_basis(int d) {
    std::vector<Eigen::MatrixXcd> basis;
    basis.reserve(static_cast<std::size_t>(d) * d);
    for (int a = 0; a < d; ++a) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
        b(a, a) = 1.0;
        basis.push_back(b);
    }
    for (int a = 0; a < d; ++a)
        for (int c = a + 1; c < d; ++c) {
            Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
            b(a, c) = 1.0;
            b(c, a) = 1.0;
            basis.push_back(b);
        }
    for (int a = 0; a < d; ++a)
        for (int c = a + 1; c < d; ++c) {
            Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
            b(a, c) = complex(0.0, 1.0);
            b(c, a) = complex(0.0, -1.0);
            basis.push_back(b);
        }
    return basis;
}

Eigen::VectorXd hermitian_coordinates(const Eigen::MatrixXcd& m) {
    const int d = static_cast<int>(m.rows());
    Eigen::VectorXd out(d * d);
    int idx = 0;
    for (int a = 0; a < d; ++a) out(idx++) = m(a, a).real();
    for (int a = 0; a < d; ++a)
        for (int c = a + 1; c < d; ++c) out(idx++) = m(a, c).real();
    for (int a = 0; a < d; ++a)
        for (int c = a + 1; c < d; ++c) out(idx++) = m(a, c).imag();
    return out;
}

Eigen::MatrixXcd from_hermitian_coordinates(const Eigen::VectorXd& u, int d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    int idx = 0;
    for (int a = 0; a < d; ++a) m(a, a) = u(idx++);
    for (int a = 0; a < d; ++a)
        for (int c = a + 1; c < d; ++c) {
            m(a, c) += u(idx);
            m(c, a) += u(idx);
            ++idx;
        }
    for (int a = 0; a < d; ++a)
        for (int c = a + 1; c < d; ++c) {
            m(a, c) += complex(0.0, u(idx));
            m(c, a) += complex(0.0, -u(idx));
            ++idx;
        }
    return m;
}

void check_state_dimension(const RedfieldGenerator& gen, const Eigen::MatrixXcd& state,
                           const char* fn) {
    if (state.rows() != gen.dim() || state.cols() != gen.dim()) {
        throw std::invalid_argument(std::string(fn) + ": state dimension mismatch");
    }
}

}  // namespace

RedfieldGenerator build_generator(const EnergyBasisSystem& system,
                                  const std::vector<OhmicBath>& baths,
                                  GeneratorMode mode) {
    for (const OhmicBath& bath : baths) {
        if (bath.coupling_op.rows() != system.dim) {
            throw std::invalid_argument(
                "build_generator: coupling operator dimension mismatch for bath '" +
                bath.label + "'");
        }
    }
    RedfieldGenerator gen{system, baths, mode, {}};
    gen.dissipators.reserve(baths.size());
    Eigen::MatrixXd mask;
    if (mode == GeneratorMode::secular) mask = secular_mask(system);
    for (const OhmicBath& bath : baths) {
        Eigen::MatrixXd L = dissipator_superoperator(system, bath);
        if (mode == GeneratorMode::secular) L = L.cwiseProduct(mask);
        gen.dissipators.push_back(std::move(L));
    }
    return gen;
}

Eigen::MatrixXcd apply_dissipator(const RedfieldGenerator& gen, std::size_t bath_index,
                                  const Eigen::MatrixXcd& state) {
    if (bath_index >= gen.dissipators.size()) {
        throw std::invalid_argument("apply_dissipator: bath index out of range");
    }
    check_state_dimension(gen, state, "apply_dissipator");
    return devectorize(gen.dissipators[bath_index] * vectorize(state), gen.dim());
}

Eigen::MatrixXcd apply_unitary(const RedfieldGenerator& gen,
                               const Eigen::MatrixXcd& state) {
    check_state_dimension(gen, state, "apply_unitary");
    const int d = gen.dim();
    Eigen::MatrixXcd out(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            out(a, b) = complex(0.0, -gen.system.bohr(a, b)) * state(a, b);
    return out;
}

Eigen::MatrixXcd apply_rhs(const RedfieldGenerator& gen, const Eigen::MatrixXcd& state) {
    check_state_dimension(gen, state, "apply_rhs");
    const int d = gen.dim();
    Eigen::VectorXcd v = vectorize(state);
    Eigen::VectorXcd dv = Eigen::VectorXcd::Zero(d * d);
    for (const Eigen::MatrixXd& L : gen.dissipators) dv.noalias() += L * v;
    Eigen::MatrixXcd out = devectorize(dv, d);
    out += apply_unitary(gen, state);
    return out;
}

Eigen::MatrixXd real_superoperator(const RedfieldGenerator& gen) {
    const int d = gen.dim();
    const int n = d * d;
    Eigen::MatrixXd dtot = Eigen::MatrixXd::Zero(n, n);
    for (const Eigen::MatrixXd& L : gen.dissipators) dtot += L;
    Eigen::VectorXd omega(n);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) omega(a * d + b) = gen.system.bohr(a, b);
    // d/dt (x + i y) = (D + diag(-i w)) (x + i y):
    //   dx/dt = D x + w .* y,  dy/dt = D y - w .* x.
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    full.topLeftCorner(n, n) = dtot;
    full.bottomRightCorner(n, n) = dtot;
    full.topRightCorner(n, n) = omega.asDiagonal();
    full.bottomLeftCorner(n, n) = -Eigen::MatrixXd(omega.asDiagonal());
    return full;
}

Eigen::MatrixXcd steady_state(const RedfieldGenerator& gen) {
    bool coupled = false;
    for (const OhmicBath& bath : gen.baths) coupled = coupled || bath.gamma > 0.0;
    if (!coupled) {
        throw std::invalid_argument(
            "steady_state: no bath with gamma > 0, fixed point is not unique");
    }
    const int d = gen.dim();
    const int n = d * d;
    Eigen::MatrixXd a(n, n);
    const std::vector<Eigen::MatrixXcd> basis = hermitian_basis(d);
    for (int k = 0; k < n; ++k) {
        a.col(k) = hermitian_coordinates(apply_rhs(gen, basis[static_cast<std::size_t>(k)]));
    }
    // The stationarity rows are linearly dependent (trace conservation); trade
    // the first diagonal row for the normalization Tr sigma = 1.
    a.row(0).setZero();
    a.row(0).head(d).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(0) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "steady_state: constrained stationarity system is singular (dim=" << d
            << ", mode=" << (gen.mode == GeneratorMode::secular ? "secular" : "nonsecular")
            << ", rank=" << lu.rank() << "/" << n << ")";
        throw SingularSystemError(msg.str());
    }
    Eigen::VectorXd u = lu.solve(b);
    // One step of iterative refinement tightens the forward error when the
    // system is ill-conditioned (near-degenerate slow mode).
    Eigen::VectorXd residual = b - a * u;
    u += lu.solve(residual);

    Eigen::MatrixXcd sigma = from_hermitian_coordinates(u, d);
    const double rhs_norm = apply_rhs(gen, sigma).cwiseAbs().maxCoeff();
    if (!(rhs_norm < 1e-12)) {
        std::ostringstream msg;
        msg << "steady_state: stationarity residual " << rhs_norm << " exceeds 1e-12";
        throw NumericalError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (sigma + sigma.adjoint()));
    if (es.eigenvalues().minCoeff() < -1e-10) {
        std::ostringstream msg;
        msg << "steady_state: solution not positive within tolerance (min eigenvalue "
            << es.eigenvalues().minCoeff() << ")";
        throw NumericalError(msg.str());
    }
    return sigma;
}

double heat_current(const RedfieldGenerator& gen, std::size_t bath_index,
                    const Eigen::MatrixXcd& state) {
    const Eigen::MatrixXcd flow = apply_dissipator(gen, bath_index, state);
    double j = 0.0;
    for (int a = 0; a < gen.dim(); ++a) {
        j += gen.system.energies[static_cast<std::size_t>(a)] * flow(a, a).real();
    }
    return j;
}

double entropy_production_rate(const RedfieldGenerator& gen,
                               const Eigen::MatrixXcd& state) {
    check_state_dimension(gen, state, "entropy_production_rate");
    constexpr double kEigenvalueFloor = 1e-14;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (state + state.adjoint()));
    const Eigen::VectorXd evals = es.eigenvalues();
    if (evals.minCoeff() < -1e-10) {
        std::ostringstream msg;
        msg << "entropy_production_rate: state eigenvalue " << evals.minCoeff()
            << " below -1e-10";
        throw NumericalError(msg.str());
    }
    Eigen::VectorXd logs(evals.size());
    for (int i = 0; i < evals.size(); ++i) {
        logs(i) = std::log(std::max(evals(i), kEigenvalueFloor));
    }
    const Eigen::MatrixXcd log_state =
        es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
    const Eigen::MatrixXcd dstate = apply_rhs(gen, state);

    double rate = -(dstate * log_state).trace().real();
    for (std::size_t m = 0; m < gen.baths.size(); ++m) {
        rate -= heat_current(gen, m, state) / gen.baths[m].temperature;
    }
    return rate;
}

std::vector<double> rdm_eigenvalues(const Eigen::MatrixXcd& state) {
    if (state.rows() != state.cols()) {
        throw std::invalid_argument("rdm_eigenvalues: state must be square");
    }
    if (!is_hermitian(state, 1e-6)) {
        throw std::invalid_argument("rdm_eigenvalues: state is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (state + state.adjoint()));
    const Eigen::VectorXd evals = es.eigenvalues();  // ascending
    return std::vector<double>(evals.data(), evals.data() + evals.size());
}

namespace {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    // Difference between the 5th- and embedded 4th-order weights.
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                            e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                            e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
};

struct PackedState {
    Eigen::VectorXd x;  // stacked (Re vec sigma, Im vec sigma)
};

Eigen::VectorXd pack_state(const Eigen::MatrixXcd& sigma) {
    const int d = static_cast<int>(sigma.rows());
    const int n = d * d;
    Eigen::VectorXd x(2 * n);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            x(a * d + b) = sigma(a, b).real();
            x(n + a * d + b) = sigma(a, b).imag();
        }
    return x;
}

Eigen::MatrixXcd unpack_state(const Eigen::VectorXd& x, int d) {
    const int n = d * d;
    Eigen::MatrixXcd sigma(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            sigma(a, b) = complex(x(a * d + b), x(n + a * d + b));
    return sigma;
}

}  // namespace

Trajectory integrate_at(const RedfieldGenerator& gen, const Eigen::MatrixXcd& sigma0,
                        const std::vector<double>& times, const IntegrateOptions& opts) {
    check_state_dimension(gen, sigma0, "integrate_at");
    if (!is_hermitian(sigma0, 1e-12)) {
        throw std::invalid_argument("integrate_at: initial state is not Hermitian");
    }
    if (std::abs(trace_real(sigma0) - 1.0) > 1e-10 ||
        std::abs(sigma0.trace().imag()) > 1e-12) {
        throw std::invalid_argument("integrate_at: initial state trace must be 1");
    }
    if (times.empty()) {
        throw std::invalid_argument("integrate_at: sample time list is empty");
    }
    if (times.front() < 0.0) {
        throw std::invalid_argument("integrate_at: sample times must be >= 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("integrate_at: sample times must be strictly increasing");
        }
    }
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) {
        throw std::invalid_argument("integrate_at: tolerances must be > 0");
    }

    const int d = gen.dim();
    const Eigen::MatrixXd a = real_superoperator(gen);
    const double a_norm = a.cwiseAbs().rowwise().sum().maxCoeff();

    Trajectory traj;
    traj.bath_currents.assign(gen.baths.size(), {});

    auto emit = [&](double t, const Eigen::VectorXd& x) {
        Eigen::MatrixXcd sigma = unpack_state(x, d);
        const double trace_drift = std::abs(sigma.trace() - complex(1.0, 0.0));
        const double herm_drift = (sigma - sigma.adjoint()).cwiseAbs().maxCoeff();
        if (trace_drift > 1e-8 || herm_drift > 1e-8) {
            std::ostringstream msg;
            msg << "integrate_at: conservation drift at t=" << t
                << " (trace " << trace_drift << ", hermiticity " << herm_drift << ")";
            throw IntegrationError(msg.str(), t);
        }
        traj.times.push_back(t);
        for (std::size_t m = 0; m < gen.baths.size(); ++m) {
            traj.bath_currents[m].push_back(heat_current(gen, m, sigma));
        }
        traj.states.push_back(std::move(sigma));
    };

    Eigen::VectorXd x = pack_state(sigma0);
    const int n2 = static_cast<int>(x.size());
    Eigen::VectorXd k1(n2), k2(n2), k3(n2), k4(n2), k5(n2), k6(n2), k7(n2);
    Eigen::VectorXd stage(n2), xnew(n2), err(n2);

    double t = 0.0;
    std::size_t next = 0;
    if (times[next] == 0.0) {
        emit(0.0, x);
        ++next;
    }
    if (next >= times.size()) return traj;

    double dt = std::min(times.back(), 0.5 / (a_norm + 1e-300));
    if (!(dt > 0.0)) dt = times.back();
    k1.noalias() = a * x;  // stays valid across rejects; refreshed on accept (FSAL)
    std::int64_t steps = 0;

    while (next < times.size()) {
        const double target = times[next];
        while (t < target) {
            if (++steps > opts.max_steps) {
                throw IntegrationError("integrate_at: step budget exhausted", t);
            }
            const bool clipped = t + dt >= target;
            const double h = clipped ? target - t : dt;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                throw IntegrationError("integrate_at: step size underflow", t);
            }
            stage = x + h * (Dopri5::a21 * k1);
            k2.noalias() = a * stage;
            stage = x + h * (Dopri5::a31 * k1 + Dopri5::a32 * k2);
            k3.noalias() = a * stage;
            stage = x + h * (Dopri5::a41 * k1 + Dopri5::a42 * k2 + Dopri5::a43 * k3);
            k4.noalias() = a * stage;
            stage = x + h * (Dopri5::a51 * k1 + Dopri5::a52 * k2 + Dopri5::a53 * k3 +
                             Dopri5::a54 * k4);
            k5.noalias() = a * stage;
            stage = x + h * (Dopri5::a61 * k1 + Dopri5::a62 * k2 + Dopri5::a63 * k3 +
                             Dopri5::a64 * k4 + Dopri5::a65 * k5);
            k6.noalias() = a * stage;
            xnew = x + h * (Dopri5::b1 * k1 + Dopri5::b3 * k3 + Dopri5::b4 * k4 +
                            Dopri5::b5 * k5 + Dopri5::b6 * k6);
            k7.noalias() = a * xnew;
            err = h * (Dopri5::e1 * k1 + Dopri5::e3 * k3 + Dopri5::e4 * k4 +
                       Dopri5::e5 * k5 + Dopri5::e6 * k6 + Dopri5::e7 * k7);

            double err_norm_sq = 0.0;
            for (int i = 0; i < n2; ++i) {
                const double scale =
                    opts.atol + opts.rtol * std::max(std::abs(x(i)), std::abs(xnew(i)));
                const double r = err(i) / scale;
                err_norm_sq += r * r;
            }
            const double err_norm = std::sqrt(err_norm_sq / n2);

            if (err_norm <= 1.0) {
                t = clipped ? target : t + h;
                x.swap(xnew);
                k1.swap(k7);  // first-same-as-last reuse
                const double factor =
                    err_norm > 0.0
                        ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0)
                        : 5.0;
                if (!clipped) {
                    dt = h * factor;
                } else {
                    dt = std::max(dt, h * factor);
                }
            } else {
                dt = h * std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
            }
        }
        emit(target, x);
        ++next;
    }
    return traj;
}

Trajectory integrate(const RedfieldGenerator& gen, const Eigen::MatrixXcd& sigma0,
                     double t_end, int n_out, const IntegrateOptions& opts) {
    if (t_end < 0.0) {
        throw std::invalid_argument("integrate: t_end must be >= 0");
    }
    if (t_end == 0.0) {
        return integrate_at(gen, sigma0, {0.0}, opts);
    }
    if (n_out < 2) {
        throw std::invalid_argument("integrate: n_out must be >= 2 when t_end > 0");
    }
    std::vector<double> times(static_cast<std::size_t>(n_out));
    for (int i = 0; i < n_out; ++i) {
        times[static_cast<std::size_t>(i)] = t_end * static_cast<double>(i) / (n_out - 1);
    }
    return integrate_at(gen, sigma0, times, opts);
}

RedfieldGenerator with_scaled_dissipators(const RedfieldGenerator& gen, double factor) {
    RedfieldGenerator scaled = gen;
    for (Eigen::MatrixXd& L : scaled.dissipators) L *= factor;
    return scaled;
}

}  // namespace vheat
