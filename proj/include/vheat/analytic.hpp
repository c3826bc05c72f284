// analytic.hpp — Closed-form steady-state expressions for the V model in the
// quasi-degenerate regime (all rates evaluated at the mean gap nu). These are
// independent of the numerical engine and serve as cross-validation oracles.
//
// Validity: the coherence and population forms assume the splitting delta acts
// only through the quadratic damping correction; they degrade when alpha is
// within ~10 delta/nu of the symmetric point alpha = 1 (see
// closed_form_reliable) and all rate-dependent forms are undefined at
// gamma = 0.

#pragma once

#include "vheat/types.hpp"

namespace vheat {

// Damping rate of the excited-excited coherence:
//   xi = (alpha^2 + 1) k_c / 2 + k_h,
// rates at the mean gap. Returns 0 when gamma = 0.
double xi(const VModelParams& params);

// Steady-state Re sigma_32. Throws std::domain_error at gamma = 0 and when
// the closed-form denominator vanishes (alpha = 1 with delta = 0).
double coherence_re_ss(const VModelParams& params);

// Steady-state Im sigma_32 = -delta Re sigma_32 / xi.
double coherence_im_ss(const VModelParams& params);

struct Populations {
    double s22{0.0};
    double s33{0.0};
    double s11{0.0};
};

// Leading-order steady populations of the full (nonsecular) dynamics; exact
// in the delta -> 0 limit. Throws std::domain_error at gamma = 0.
Populations populations_ss(const VModelParams& params);

// Total excited-state occupation s22 + s33 of the nonsecular steady state in
// the delta -> 0 limit: (e_c + e_h) / (e_c + e_h + 1), rate-independent.
double excited_sum_ss(const VModelParams& params);

// Steady heat current out of the hot bath for the full dynamics in the
// delta -> 0 limit:
//   j = nu (1 + alpha)^2 k_h k_c (e_h - e_c)
//       / [((alpha^2 + 1) k_c + 2 k_h)(e_c + e_h + 1)].
// Vanishes at alpha = -1 (destructive interference) and T_hot = T_cold.
// Throws std::domain_error at gamma = 0.
double current_ss(const VModelParams& params);

// Steady heat current predicted by the secular (coherence-free) description;
// nonzero for every alpha when the temperatures differ. Throws
// std::domain_error at gamma = 0.
double secular_current_ss(const VModelParams& params);

// Steady populations of the secular description. Throws std::domain_error at
// gamma = 0.
Populations secular_populations_ss(const VModelParams& params);

// The interference-node amplitude alpha* = k_h / k_c where the steady
// coherence changes sign; equals (n(nu, T_hot) + 1) / (n(nu, T_cold) + 1).
// Throws std::domain_error at gamma = 0.
double special_point_alpha(const VModelParams& params);

// True where the closed forms above are trustworthy: |alpha - 1| >= 10 delta/nu.
bool closed_form_reliable(const VModelParams& params);

}  // namespace vheat
