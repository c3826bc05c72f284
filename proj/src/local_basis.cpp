#include "vheat/local_basis.hpp"

#include <cmath>

#include "vheat/bath.hpp"
#include "vheat/vmodel.hpp"

namespace vheat {

Eigen::Matrix3d local_unitary() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3d u;
    u << 1.0, 0.0, 0.0,
         0.0, -s, s,
         0.0, s, s;
    return u;
}

LocalPicture to_local(const VModelParams& params) {
    const VModel model = build_vmodel(params);
    const Eigen::Matrix3d u = local_unitary();
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a) h(a, a) = model.system.energies[static_cast<std::size_t>(a)];
    LocalPicture local;
    local.h_local = u * h * u.transpose();
    local.s_h_local = u * model.hot.coupling_op * u.transpose();
    local.s_c_local = u * model.cold.coupling_op * u.transpose();
    return local;
}

SingleBathReduction single_bath_mapping(double nu, double temperature, double gamma) {
    if (!(nu > 0.0)) throw std::invalid_argument("single_bath_mapping: nu must be > 0");
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("single_bath_mapping: temperature must be > 0");
    }
    if (!(gamma > 0.0)) {
        throw std::domain_error("single_bath_mapping: undefined at gamma = 0");
    }
    SingleBathReduction red;
    red.spontaneous_rate = 2.0 * spectral_density(nu, gamma);
    red.total_rate = red.spontaneous_rate * (bose_occupation(nu, temperature) + 1.0);
    red.pump_rate = red.total_rate - red.spontaneous_rate;  // = 2 J(nu) n
    red.phi = (1.0 + 2.0 * std::exp(-nu / temperature)) * red.total_rate;
    return red;
}

EffectiveSingleBath alpha_one_mapping(const VModelParams& params) {
    params.validate();
    if (params.alpha != 1.0) {
        throw std::invalid_argument(
            "alpha_one_mapping: reduction exists only at alpha = 1");
    }
    if (!(params.gamma > 0.0)) {
        throw std::domain_error("alpha_one_mapping: undefined at gamma = 0");
    }
    const SingleBathReduction hot = single_bath_mapping(params.nu, params.t_hot, params.gamma);
    const SingleBathReduction cold =
        single_bath_mapping(params.nu, params.t_cold, params.gamma);
    EffectiveSingleBath eff;
    eff.k_eff = hot.total_rate + cold.total_rate;
    eff.phi_eff = hot.phi + cold.phi;
    return eff;
}

}  // namespace vheat
