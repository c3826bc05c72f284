// redfield.hpp — Generic weak-coupling (Redfield-type) machinery: generator
// construction in full (nonsecular) or secular form, right-hand-side
// application, adaptive transient integration, direct steady-state solve,
// heat currents, and thermodynamic diagnostics.

#pragma once

#include <cstdint>
#include <vector>

#include "vheat/types.hpp"

namespace vheat {

enum class GeneratorMode { nonsecular, secular };

// Precomputed linear map sigma -> dsigma/dt, split into the unitary part
// (diagonal in the energy basis: -i w_ab sigma_ab) and one real superoperator
// per bath acting on the row-major vectorization of sigma. Immutable after
// construction; safe to share across threads.
struct RedfieldGenerator {
    EnergyBasisSystem system;
    std::vector<OhmicBath> baths;
    GeneratorMode mode{GeneratorMode::nonsecular};
    // dissipators[m] is a (dim^2 x dim^2) real matrix D_m with
    // (d sigma/dt)_{ab} += sum_{cd} D_m[(a,b),(c,d)] sigma_{cd},
    // rows/columns indexed row-major as a*dim + b.
    std::vector<Eigen::MatrixXd> dissipators;

    int dim() const { return system.dim; }
};

// Build the generator. In nonsecular mode every bath term
// R_{ab,cd}(w) = S_ab S_cd k(w)/2 (real; no principal-value shift) is kept.
// In secular mode a term connecting element (a,b) to element (c,d) is kept
// only when their Bohr frequencies agree within |w - w'| < 1e-9 max(1, |w|);
// if any two distinct levels are degenerate at that tolerance the secular
// grouping would merge populations with a coherence, and construction is
// refused with std::invalid_argument.
RedfieldGenerator build_generator(const EnergyBasisSystem& system,
                                  const std::vector<OhmicBath>& baths,
                                  GeneratorMode mode);

// Bath m's contribution D_m(sigma) to the time derivative.
Eigen::MatrixXcd apply_dissipator(const RedfieldGenerator& gen,
                                  std::size_t bath_index,
                                  const Eigen::MatrixXcd& state);

// Unitary part -i[H_S, sigma] (diagonal Hamiltonian).
Eigen::MatrixXcd apply_unitary(const RedfieldGenerator& gen,
                               const Eigen::MatrixXcd& state);

// Full right-hand side -i[H_S, sigma] + sum_m D_m(sigma). Trace-annihilating
// and Hermiticity-preserving.
Eigen::MatrixXcd apply_rhs(const RedfieldGenerator& gen,
                           const Eigen::MatrixXcd& state);

// The full generator as one real (2 dim^2 x 2 dim^2) matrix acting on the
// stacked (Re vec sigma, Im vec sigma); used by the integrator's inner loop.
Eigen::MatrixXd real_superoperator(const RedfieldGenerator& gen);

// Unique trace-one fixed point: vectorize the generator over a Hermitian
// parametrization (dim^2 real unknowns), replace one redundant row by the
// trace constraint, and solve directly with full pivoting plus one step of
// iterative refinement. Throws SingularSystemError on rank deficiency and
// NumericalError if the result fails the residual (1e-12) or positivity
// (eigenvalues >= -1e-10) checks.
Eigen::MatrixXcd steady_state(const RedfieldGenerator& gen);

// Energy flow from bath m into the system: Tr[H_S D_m(sigma)], positive
// toward the system.
double heat_current(const RedfieldGenerator& gen, std::size_t bath_index,
                    const Eigen::MatrixXcd& state);

// Irreversible entropy production rate
//   -sum_m j_m / T_m - Tr[ (dsigma/dt) ln sigma ],
// with ln sigma through an eigendecomposition, eigenvalues floored at 1e-14.
// Throws NumericalError if an eigenvalue lies below -1e-10.
double entropy_production_rate(const RedfieldGenerator& gen,
                               const Eigen::MatrixXcd& state);

// Ascending real eigenvalues of a Hermitian state.
std::vector<double> rdm_eigenvalues(const Eigen::MatrixXcd& state);

// Sampled solution of the master equation plus per-bath currents.
struct Trajectory {
    std::vector<double> times;                      // strictly increasing
    std::vector<Eigen::MatrixXcd> states;           // one per sample
    std::vector<std::vector<double>> bath_currents; // [bath][sample]
};

struct IntegrateOptions {
    double rtol{1e-8};
    double atol{1e-10};
    std::int64_t max_steps{100'000'000};
};

// Adaptive embedded Runge-Kutta 5(4) integration from sigma0 at t = 0,
// sampled at n_out uniformly spaced times in [0, t_end]. t_end = 0 returns
// the single initial sample. Each emitted state is checked for trace and
// Hermiticity drift (1e-8); violations and step failures raise
// IntegrationError carrying the last good time.
Trajectory integrate(const RedfieldGenerator& gen, const Eigen::MatrixXcd& sigma0,
                     double t_end, int n_out, const IntegrateOptions& opts = {});

// Same integration, sampled at an explicit strictly increasing list of
// nonnegative times.
Trajectory integrate_at(const RedfieldGenerator& gen, const Eigen::MatrixXcd& sigma0,
                        const std::vector<double>& times,
                        const IntegrateOptions& opts = {});

// Copy of a generator with every dissipator scaled by a constant; a test hook
// for falsifiability checks (a negated dissipator must trip the audits).
RedfieldGenerator with_scaled_dissipators(const RedfieldGenerator& gen, double factor);

}  // namespace vheat
