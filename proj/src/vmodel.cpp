#include "vheat/vmodel.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vheat/bath.hpp"

namespace vheat {

namespace {

struct ArmRates {
    double kh21{0.0}, kh31{0.0};  // hot-bath downward rates on each arm
    double kc21{0.0}, kc31{0.0};  // cold-bath downward rates
    double eh21{0.0}, eh31{0.0};  // detailed-balance factors exp(-w/T_hot)
    double ec21{0.0}, ec31{0.0};  //                          exp(-w/T_cold)
};

double downward_rate(double omega, double temperature, double gamma) {
    if (gamma == 0.0) return 0.0;
    return 2.0 * spectral_density(omega, gamma) * (bose_occupation(omega, temperature) + 1.0);
}

ArmRates exact_rates(const VModelParams& params) {
    const double w21 = params.nu - params.delta;
    const double w31 = params.nu;
    ArmRates r;
    r.kh21 = downward_rate(w21, params.t_hot, params.gamma);
    r.kh31 = downward_rate(w31, params.t_hot, params.gamma);
    r.kc21 = downward_rate(w21, params.t_cold, params.gamma);
    r.kc31 = downward_rate(w31, params.t_cold, params.gamma);
    r.eh21 = std::exp(-w21 / params.t_hot);
    r.eh31 = std::exp(-w31 / params.t_hot);
    r.ec21 = std::exp(-w21 / params.t_cold);
    r.ec31 = std::exp(-w31 / params.t_cold);
    return r;
}

struct MeanRates {
    double kh{0.0}, kc{0.0};  // both arms at the mean gap nu
    double eh{0.0}, ec{0.0};
    double xi{0.0};
};

MeanRates mean_rates(const VModelParams& params) {
    MeanRates r;
    r.kh = downward_rate(params.nu, params.t_hot, params.gamma);
    r.kc = downward_rate(params.nu, params.t_cold, params.gamma);
    r.eh = std::exp(-params.nu / params.t_hot);
    r.ec = std::exp(-params.nu / params.t_cold);
    r.xi = 0.5 * (params.alpha * params.alpha + 1.0) * r.kc + r.kh;
    return r;
}

}  // namespace

VModel build_vmodel(const VModelParams& params) {
    params.validate();
    EnergyBasisSystem system(3, {0.0, params.nu - params.delta, params.nu});
    Eigen::MatrixXd s_hot = Eigen::MatrixXd::Zero(3, 3);
    s_hot(0, 1) = s_hot(1, 0) = 1.0;
    s_hot(0, 2) = s_hot(2, 0) = 1.0;
    Eigen::MatrixXd s_cold = Eigen::MatrixXd::Zero(3, 3);
    s_cold(0, 1) = s_cold(1, 0) = 1.0;
    s_cold(0, 2) = s_cold(2, 0) = params.alpha;
    return VModel{system,
                  OhmicBath("hot", params.t_hot, params.gamma, s_hot),
                  OhmicBath("cold", params.t_cold, params.gamma, s_cold)};
}

Eigen::MatrixXcd full_rhs(const VModelParams& params, const Eigen::MatrixXcd& state) {
    params.validate();
    if (state.rows() != 3 || state.cols() != 3) {
        throw std::invalid_argument("full_rhs: state must be 3x3");
    }
    const ArmRates r = exact_rates(params);
    const double alpha = params.alpha;
    const double s22 = state(1, 1).real();
    const double s33 = state(2, 2).real();
    const double s11 = state(0, 0).real();
    const complex s32 = state(2, 1);
    const double s32_re = s32.real();

    const complex ds32 =
        complex(0.0, -params.delta) * s32 -
        0.5 * (r.kh31 + r.kh21 + alpha * alpha * r.kc31 + r.kc21) * s32 -
        0.5 * (r.kh21 + alpha * r.kc21) * s22 - 0.5 * (r.kh31 + alpha * r.kc31) * s33 +
        0.5 *
            (r.kh31 * r.eh31 + r.kh21 * r.eh21 + alpha * r.kc31 * r.ec31 +
             alpha * r.kc21 * r.ec21) *
            s11;
    const double ds22 = -(r.kh21 + r.kc21) * s22 +
                        (r.kh21 * r.eh21 + r.kc21 * r.ec21) * s11 -
                        (r.kh31 + alpha * r.kc31) * s32_re;
    const double ds33 = -(r.kh31 + alpha * alpha * r.kc31) * s33 +
                        (r.kh31 * r.eh31 + alpha * alpha * r.kc31 * r.ec31) * s11 -
                        (r.kh21 + alpha * r.kc21) * s32_re;

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(3, 3);
    out(1, 1) = ds22;
    out(2, 2) = ds33;
    out(0, 0) = -(ds22 + ds33);
    out(2, 1) = ds32;
    out(1, 2) = std::conj(ds32);
    return out;
}

bool quasi_degenerate_regime(const VModelParams& params) {
    return params.delta / params.nu <= 0.05;
}

QuasiDegenerateState quasi_degenerate_rhs(const VModelParams& params,
                                          const QuasiDegenerateState& qstate) {
    params.validate();
    if (!quasi_degenerate_regime(params)) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            std::fprintf(stderr,
                         "warning: quasi_degenerate_rhs used with delta/nu = %g > 0.05; "
                         "the reduction is unreliable there\n",
                         params.delta / params.nu);
        }
    }
    const MeanRates r = mean_rates(params);
    const double alpha = params.alpha;
    const double s11 = qstate.s11();
    const double pump2 = r.kh * r.eh + r.kc * r.ec;
    const double pump3 = r.kh * r.eh + alpha * alpha * r.kc * r.ec;
    const double cross = r.kh + alpha * r.kc;
    const double pump_coh = r.kh * r.eh + alpha * r.kc * r.ec;

    QuasiDegenerateState out;
    out.s22 = -(r.kh + r.kc) * qstate.s22 + pump2 * s11 - cross * qstate.s32_re;
    out.s33 = -(r.kh + alpha * alpha * r.kc) * qstate.s33 + pump3 * s11 -
              cross * qstate.s32_re;
    out.s32_re = params.delta * qstate.s32_im - r.xi * qstate.s32_re -
                 0.5 * cross * (qstate.s22 + qstate.s33) + pump_coh * s11;
    out.s32_im = -params.delta * qstate.s32_re - r.xi * qstate.s32_im;
    return out;
}

SteadyLinearSystem steady_linear_system(const VModelParams& params) {
    params.validate();
    const MeanRates r = mean_rates(params);
    const double alpha = params.alpha;
    const double cross = r.kh + alpha * r.kc;

    SteadyLinearSystem sys;
    sys.xi = r.xi;
    // Stationarity of s22 and s33 with s11 eliminated by the trace.
    sys.m(0, 0) = -((r.eh + 1.0) * r.kh + (r.ec + 1.0) * r.kc);
    sys.m(0, 1) = -(r.eh * r.kh + r.ec * r.kc);
    sys.m(0, 2) = -cross;
    sys.d(0) = r.eh * r.kh + r.ec * r.kc;

    sys.m(1, 0) = -(r.eh * r.kh + alpha * alpha * r.ec * r.kc);
    sys.m(1, 1) = -((r.eh + 1.0) * r.kh + alpha * alpha * (r.ec + 1.0) * r.kc);
    sys.m(1, 2) = -cross;
    sys.d(1) = r.eh * r.kh + alpha * alpha * r.ec * r.kc;

    // Stationarity of s32_re after eliminating s32_im = -delta s32_re / xi.
    const double row3 = 0.5 * r.kh * (1.0 + 2.0 * r.eh) +
                        0.5 * alpha * r.kc * (1.0 + 2.0 * r.ec);
    sys.m(2, 0) = -row3;
    sys.m(2, 1) = -row3;
    sys.m(2, 2) = -(r.xi + (r.xi > 0.0 ? params.delta * params.delta / r.xi : 0.0));
    sys.d(2) = r.eh * r.kh + alpha * r.ec * r.kc;
    return sys;
}

QuasiDegenerateState solve_quasi_degenerate_ss(const VModelParams& params) {
    const SteadyLinearSystem sys = steady_linear_system(params);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(sys.m);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "solve_quasi_degenerate_ss: reduced system is singular (alpha="
            << params.alpha << ", gamma=" << params.gamma << ")";
        throw SingularSystemError(msg.str());
    }
    const Eigen::Vector3d rhs = -sys.d;
    Eigen::Vector3d v = lu.solve(rhs);
    v += lu.solve(rhs - sys.m * v);

    QuasiDegenerateState out;
    out.s22 = v(0);
    out.s33 = v(1);
    out.s32_re = v(2);
    out.s32_im = sys.xi > 0.0 ? -params.delta * v(2) / sys.xi : 0.0;
    return out;
}

}  // namespace vheat
