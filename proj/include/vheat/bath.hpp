// bath.hpp — Bose occupation, Ohmic spectral density, and the signed
// transition rate k(w) entering the weak-coupling generator.

#pragma once

#include "vheat/types.hpp"

namespace vheat {

// Bose-Einstein occupation 1/(exp(w/T) - 1); defined for w > 0 only.
double bose_occupation(double omega, double temperature);

// Ohmic spectral density J(w) = gamma * w with no high-frequency cutoff;
// defined for w >= 0 only (the signed rate handles negative frequencies).
double spectral_density(double omega, double gamma);

// Full golden-rule rate at signed frequency:
//   w > 0 : 2 J(w)  [n(w) + 1]      (emission into the bath)
//   w < 0 : 2 J(|w|) n(|w|)         (absorption from the bath)
//   w = 0 : 2 gamma T               (analytic Ohmic limit of 2 J(w) n(w))
// Satisfies detailed balance k(w) = exp(w/T) k(-w).
double transition_rate(double omega, const OhmicBath& bath);

}  // namespace vheat
