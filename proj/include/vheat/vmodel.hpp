// vmodel.hpp — The three-level "V" configuration: a ground level coupled to
// two near-degenerate excited levels, with a hot bath driving both arms
// equally and a cold bath driving them with relative amplitude alpha. Also
// provides the model-specialized right-hand sides (full and quasi-degenerate)
// and the reduced steady-state linear system.

#pragma once

#include <vector>

#include "vheat/redfield.hpp"
#include "vheat/types.hpp"

namespace vheat {

// Assembled model: energies (0, nu - delta, nu); hot coupling amplitude 1 on
// both |1><2|, |1><3| arms; cold amplitudes 1 and alpha.
struct VModel {
    EnergyBasisSystem system;
    OhmicBath hot;
    OhmicBath cold;

    std::vector<OhmicBath> baths() const { return {hot, cold}; }
};

VModel build_vmodel(const VModelParams& params);

// Reduced state on the invariant subspace sigma_12 = sigma_13 = 0 reached
// from any state that is diagonal apart from the excited-excited coherence.
struct QuasiDegenerateState {
    double s22{0.0};     // population of the lower excited level
    double s33{0.0};     // population of the upper excited level
    double s32_re{0.0};  // Re sigma_32 (excited-excited coherence)
    double s32_im{0.0};  // Im sigma_32

    double s11() const { return 1.0 - s22 - s33; }
};

// Model-specialized right-hand side with every rate evaluated at its exact
// Bohr frequency (nu and nu - delta). Agrees with the generic nonsecular
// generator on the invariant subspace; states outside it are still accepted
// and only the invariant-subspace structure is evolved exactly.
Eigen::MatrixXcd full_rhs(const VModelParams& params, const Eigen::MatrixXcd& state);

// Right-hand side of the quasi-degenerate reduction: both arm rates taken at
// the mean gap nu, the splitting delta kept only as the coherence rotation.
// Warns (once per process, stderr) when delta/nu > 0.05, where the reduction
// degrades.
QuasiDegenerateState quasi_degenerate_rhs(const VModelParams& params,
                                          const QuasiDegenerateState& qstate);

// True when the quasi-degenerate reduction is trustworthy (delta/nu <= 0.05).
bool quasi_degenerate_regime(const VModelParams& params);

// Steady state of the quasi-degenerate reduction as a 3x3 linear system in
// v = (s22, s33, s32_re) after eliminating s11 by the trace and s32_im by its
// own stationarity (s32_im = -delta s32_re / xi):  m v = -d.
struct SteadyLinearSystem {
    Eigen::Matrix3d m;
    Eigen::Vector3d d;
    double xi{0.0};  // coherence damping rate (alpha^2 + 1) k_c / 2 + k_h
};

SteadyLinearSystem steady_linear_system(const VModelParams& params);

// Direct solve of the reduced system (full-pivot LU plus one refinement
// step). Throws SingularSystemError when the system is rank-deficient, e.g.
// at gamma = 0 where every rate vanishes.
QuasiDegenerateState solve_quasi_degenerate_ss(const VModelParams& params);

}  // namespace vheat
