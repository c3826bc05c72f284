#include "vheat/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace vheat {

double bose_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) {
        throw std::domain_error("bose_occupation: omega must be > 0");
    }
    if (!(temperature > 0.0)) {
        throw std::domain_error("bose_occupation: temperature must be > 0");
    }
    // expm1 keeps full precision for omega/temperature << 1.
    return 1.0 / std::expm1(omega / temperature);
}

double spectral_density(double omega, double gamma) {
    if (omega < 0.0) {
        throw std::domain_error("spectral_density: omega must be >= 0");
    }
    return gamma * omega;
}

double transition_rate(double omega, const OhmicBath& bath) {
    if (omega > 0.0) {
        return 2.0 * spectral_density(omega, bath.gamma) *
               (bose_occupation(omega, bath.temperature) + 1.0);
    }
    if (omega < 0.0) {
        return 2.0 * spectral_density(-omega, bath.gamma) *
               bose_occupation(-omega, bath.temperature);
    }
    // Removable w -> 0 limit of 2 J(w) n(w) for an Ohmic density.
    return 2.0 * bath.gamma * bath.temperature;
}

}  // namespace vheat
