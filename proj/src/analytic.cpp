#include "vheat/analytic.hpp"

#include <cmath>

#include "vheat/bath.hpp"

namespace vheat {

namespace {

struct MeanRates {
    double kh{0.0}, kc{0.0};
    double eh{0.0}, ec{0.0};
};

MeanRates mean_rates(const VModelParams& params) {
    params.validate();
    MeanRates r;
    if (params.gamma > 0.0) {
        r.kh = 2.0 * spectral_density(params.nu, params.gamma) *
               (bose_occupation(params.nu, params.t_hot) + 1.0);
        r.kc = 2.0 * spectral_density(params.nu, params.gamma) *
               (bose_occupation(params.nu, params.t_cold) + 1.0);
    }
    r.eh = std::exp(-params.nu / params.t_hot);
    r.ec = std::exp(-params.nu / params.t_cold);
    return r;
}

void require_coupled(const VModelParams& params, const char* fn) {
    if (!(params.gamma > 0.0)) {
        throw std::domain_error(std::string(fn) +
                                ": undefined at gamma = 0 (all rates vanish)");
    }
}

}  // namespace

double xi(const VModelParams& params) {
    const MeanRates r = mean_rates(params);
    return 0.5 * (params.alpha * params.alpha + 1.0) * r.kc + r.kh;
}

double coherence_re_ss(const VModelParams& params) {
    require_coupled(params, "coherence_re_ss");
    const MeanRates r = mean_rates(params);
    const double a = params.alpha;
    const double a2 = a * a;
    const double am1 = a - 1.0;
    const double xi_v = 0.5 * (a2 + 1.0) * r.kc + r.kh;

    const double num = (r.eh - r.ec) * (r.kh - a * r.kc) * am1 * am1;
    const double psi_terms = r.kc * r.kh + 2.0 * r.eh * r.kh * r.kh + r.kh * r.kh +
                             a2 * r.kc * r.kc + 2.0 * a2 * r.ec * r.kc * r.kc +
                             r.ec * r.kc * r.kh + r.eh * r.kc * r.kh +
                             a2 * r.kc * r.kh + a2 * r.ec * r.kc * r.kh +
                             a2 * r.eh * r.kc * r.kh;
    const double psi = 2.0 * xi_v * psi_terms / (r.kh * r.kc);
    const double den = am1 * am1 * ((a2 + 1.0) * r.kc + 2.0 * r.kh) *
                           (r.ec + r.eh + 1.0) +
                       psi * params.delta * params.delta;
    if (den == 0.0) {
        throw std::domain_error(
            "coherence_re_ss: denominator vanishes (alpha = 1 with delta = 0)");
    }
    return num / den;
}

double coherence_im_ss(const VModelParams& params) {
    const double re = coherence_re_ss(params);
    const double xi_v = xi(params);
    return -params.delta * re / xi_v;
}

Populations populations_ss(const VModelParams& params) {
    require_coupled(params, "populations_ss");
    const MeanRates r = mean_rates(params);
    const double a2 = params.alpha * params.alpha;
    const double den = ((a2 + 1.0) * r.kc + 2.0 * r.kh) * (r.ec + r.eh + 1.0);
    Populations p;
    p.s22 = (r.kc * (a2 * r.eh + r.ec) + r.kh * (r.ec + r.eh)) / den;
    p.s33 = (r.kc * (r.eh + a2 * r.ec) + r.kh * (r.ec + r.eh)) / den;
    p.s11 = 1.0 - p.s22 - p.s33;
    return p;
}

double excited_sum_ss(const VModelParams& params) {
    const MeanRates r = mean_rates(params);
    return (r.ec + r.eh) / (r.ec + r.eh + 1.0);
}

double current_ss(const VModelParams& params) {
    require_coupled(params, "current_ss");
    const MeanRates r = mean_rates(params);
    const double a = params.alpha;
    const double onepa = 1.0 + a;
    const double den = ((a * a + 1.0) * r.kc + 2.0 * r.kh) * (r.ec + r.eh + 1.0);
    return params.nu * onepa * onepa * r.kh * r.kc * (r.eh - r.ec) / den;
}

double secular_current_ss(const VModelParams& params) {
    require_coupled(params, "secular_current_ss");
    const MeanRates r = mean_rates(params);
    const double a2 = params.alpha * params.alpha;
    const double num =
        params.nu * r.kh * r.kc * (r.eh - r.ec) * (r.kh * (a2 + 1.0) + 2.0 * a2 * r.kc);
    const double den = (r.kh + r.kc) * (r.kh + a2 * r.kc) +
                       r.eh * (2.0 * r.kh * r.kh + r.kc * r.kh + a2 * r.kc * r.kh) +
                       r.ec * (2.0 * a2 * r.kc * r.kc + r.kc * r.kh + a2 * r.kc * r.kh);
    return num / den;
}

Populations secular_populations_ss(const VModelParams& params) {
    require_coupled(params, "secular_populations_ss");
    const MeanRates r = mean_rates(params);
    const double a2 = params.alpha * params.alpha;
    const double det = (r.kh * (1.0 + r.eh) + r.kc * (1.0 + r.ec)) *
                           (r.kh * (1.0 + r.eh) + a2 * r.kc * (1.0 + r.ec)) -
                       (r.kh * r.eh + r.kc * r.ec) * (r.kh * r.eh + a2 * r.kc * r.ec);
    Populations p;
    p.s22 = (r.kc * a2 + r.kh) * (r.ec * r.kc + r.eh * r.kh) / det;
    p.s33 = (r.kc + r.kh) * (r.ec * r.kc * a2 + r.eh * r.kh) / det;
    p.s11 = 1.0 - p.s22 - p.s33;
    return p;
}

double special_point_alpha(const VModelParams& params) {
    require_coupled(params, "special_point_alpha");
    const MeanRates r = mean_rates(params);
    return r.kh / r.kc;
}

bool closed_form_reliable(const VModelParams& params) {
    return std::abs(params.alpha - 1.0) >= 10.0 * params.delta / params.nu;
}

}  // namespace vheat
