// types.hpp — Core records: energy-basis system, Ohmic bath, V-model parameters,
// and the error taxonomy shared across the library.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vheat {

using complex = std::complex<double>;

// Diagonal system Hamiltonian given by its energy eigenvalues (natural units,
// hbar = k_B = 1). Bohr frequencies are differences of the stored energies.
struct EnergyBasisSystem {
    int dim{0};
    std::vector<double> energies;

    EnergyBasisSystem(int dim_, std::vector<double> energies_)
        : dim(dim_), energies(std::move(energies_)) {
        if (dim < 2) {
            throw std::invalid_argument("EnergyBasisSystem: dim must be >= 2");
        }
        if (static_cast<int>(energies.size()) != dim) {
            throw std::invalid_argument(
                "EnergyBasisSystem: energies list length must equal dim");
        }
    }

    // w_ab = E_a - E_b; antisymmetric in (a, b) by construction.
    double bohr(int a, int b) const { return energies.at(static_cast<std::size_t>(a)) -
                                             energies.at(static_cast<std::size_t>(b)); }

    Eigen::MatrixXcd hamiltonian() const {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        for (int a = 0; a < dim; ++a) h(a, a) = energies[static_cast<std::size_t>(a)];
        return h;
    }
};

// Thermal bath with Ohmic spectral density J(w) = gamma * w (no cutoff) and a
// real symmetric system coupling operator.
struct OhmicBath {
    std::string label;            // conventional identifiers: "hot", "cold"
    double temperature{1.0};      // strictly positive
    double gamma{0.0};            // dimensionless coupling, >= 0
    Eigen::MatrixXd coupling_op;  // real symmetric, dim x dim

    OhmicBath(std::string label_, double temperature_, double gamma_,
              Eigen::MatrixXd coupling_op_)
        : label(std::move(label_)),
          temperature(temperature_),
          gamma(gamma_),
          coupling_op(std::move(coupling_op_)) {
        if (!(temperature > 0.0)) {
            throw std::invalid_argument("OhmicBath: temperature must be > 0");
        }
        if (!(gamma >= 0.0)) {
            throw std::invalid_argument("OhmicBath: gamma must be >= 0");
        }
        if (coupling_op.rows() != coupling_op.cols()) {
            throw std::invalid_argument("OhmicBath: coupling_op must be square");
        }
        if ((coupling_op - coupling_op.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("OhmicBath: coupling_op must be symmetric");
        }
    }
};

// Full parameter record of the three-level V system coupled to hot/cold baths:
// energies (0, nu - delta, nu); the hot bath couples both excited states to the
// ground state with unit amplitude, the cold bath with amplitudes (1, alpha).
struct VModelParams {
    double nu{1.0};        // ground-to-upper gap, > 0
    double delta{1e-4};    // excited-state splitting, >= 0 and < nu
    double alpha{1.0};     // cold-arm interference amplitude, any real
    double t_hot{4.0};     // hot bath temperature, > 0
    double t_cold{2.0};    // cold bath temperature, > 0
    double gamma{0.0071};  // dimensionless system-bath coupling, >= 0

    void validate() const {
        if (!(nu > 0.0)) throw std::invalid_argument("VModelParams: nu must be > 0");
        if (!(delta >= 0.0)) throw std::invalid_argument("VModelParams: delta must be >= 0");
        if (!(delta < nu)) throw std::invalid_argument("VModelParams: delta must be < nu");
        if (!(t_hot > 0.0)) throw std::invalid_argument("VModelParams: t_hot must be > 0");
        if (!(t_cold > 0.0)) throw std::invalid_argument("VModelParams: t_cold must be > 0");
        if (!(gamma >= 0.0)) throw std::invalid_argument("VModelParams: gamma must be >= 0");
    }
};

// ---------------------------------------------------------------------------
// Error taxonomy. Bad parameters raise std::invalid_argument / std::domain_error;
// the types below separate runtime failure modes so callers can map them to
// distinct exit codes.
// ---------------------------------------------------------------------------

// Adaptive integration failed (step underflow, step budget exhausted, or a
// conservation drift beyond tolerance); carries the last successfully reached time.
struct IntegrationError : std::runtime_error {
    double last_good_time{0.0};
    IntegrationError(const std::string& msg, double t)
        : std::runtime_error(msg), last_good_time(t) {}
};

// A constrained linear system for a steady state is rank-deficient.
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computed quantity failed a numerical sanity check (residual, positivity).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A produced result violates a declared output invariant.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Density-matrix helpers.
// ---------------------------------------------------------------------------

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double trace_real(const Eigen::MatrixXcd& m) { return m.trace().real(); }

// |0><0| on a dim-level system; the conventional transient initial condition.
inline Eigen::MatrixXcd ground_state_density(int dim) {
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(dim, dim);
    sigma(0, 0) = 1.0;
    return sigma;
}

}  // namespace vheat
