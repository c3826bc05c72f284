// local_basis.hpp — Change of basis between the energy eigenbasis and the
// "local" picture in which the two excited levels are replaced by their
// antisymmetric/symmetric combinations, plus the effective single-mode
// reductions that become exact in special parameter regimes.

#pragma once

#include "vheat/types.hpp"

namespace vheat {

// Orthogonal involution (symmetric, U U = I, det = -1) mapping the energy
// basis to the local basis: ground level fixed, excited levels mixed to
// (|3> - |2>)/sqrt(2) and (|2> + |3>)/sqrt(2).
Eigen::Matrix3d local_unitary();

// The V model conjugated into the local basis, X -> U X U^T.
struct LocalPicture {
    Eigen::Matrix3d h_local;    // [[0,0,0],[0,nu-delta/2,delta/2],[0,delta/2,nu-delta/2]]
    Eigen::Matrix3d s_h_local;  // sqrt(2) on the ground <-> symmetric arm only
    Eigen::Matrix3d s_c_local;  // (1+alpha)/sqrt(2) symmetric, (alpha-1)/sqrt(2) antisymmetric
};

// Exact conjugation of the model operators. At alpha = 1 the cold bath also
// couples only to the symmetric combination (the antisymmetric level becomes
// side-coupled and dark); at alpha = -1 the two baths couple to orthogonal
// combinations (a serial chain).
LocalPicture to_local(const VModelParams& params);

// Degenerate pair driven by one thermal bath: the closed population/coherence
// dynamics is governed by three rates derived from the downward rate
// k = 2 J(nu) (n + 1).
struct SingleBathReduction {
    double pump_rate{0.0};         // r = k exp(-nu/T) = 2 J(nu) n        (upward)
    double spontaneous_rate{0.0};  // 2 J(nu)                             (T-independent)
    double total_rate{0.0};        // k = spontaneous_rate + pump_rate    (downward)
    double phi{0.0};               // relaxation rate of the bright mode, (1 + 2 e^{-nu/T}) k

    // Fixed-point population of either excited level, (phi - k)/(2 phi);
    // equals the Gibbs weight e^{-nu/T} / (1 + 2 e^{-nu/T}).
    double steady_p() const { return (phi - total_rate) / (2.0 * phi); }
};

// Throws std::domain_error when gamma = 0 (no relaxation, phi = 0).
SingleBathReduction single_bath_mapping(double nu, double temperature, double gamma);

// At alpha = 1 both baths couple to the same (symmetric) combination, so the
// two-bath problem reduces to a single effective bath with additive rates.
struct EffectiveSingleBath {
    double k_eff{0.0};    // k_h + k_c
    double phi_eff{0.0};  // (1 + 2 e^{-nu/T_h}) k_h + (1 + 2 e^{-nu/T_c}) k_c

    double steady_p() const { return (phi_eff - k_eff) / (2.0 * phi_eff); }
};

// Throws std::domain_error when gamma = 0 and std::invalid_argument when
// alpha != 1 (the reduction only exists at the symmetric point).
EffectiveSingleBath alpha_one_mapping(const VModelParams& params);

}  // namespace vheat
