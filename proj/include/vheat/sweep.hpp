// sweep.hpp — Parameter-sweep drivers behind the command-line tool: steady
// and transient scans over alpha, splitting, temperature bias, and time, with
// CSV output and a trajectory-level thermodynamic audit. Sweep points are
// evaluated independently of one another; rows are always emitted in grid
// order, so identical configurations produce byte-identical files.

#pragma once

#include <string>
#include <vector>

#include "vheat/redfield.hpp"
#include "vheat/types.hpp"

namespace vheat {

// ---------------------------------------------------------------------------
// Engines and grids.
// ---------------------------------------------------------------------------

enum class EngineKind {
    nonsecular,               // full generator, numeric steady state / transient
    secular,                  // coherence-free generator
    analytic,                 // closed-form steady state (mean-gap rates)
    quasi_degenerate_linear,  // reduced 3x3 linear solve
};

// Accepts the hyphenated spellings used on the command line.
EngineKind parse_engine(const std::string& name);
std::string engine_name(EngineKind engine);

// Finite, strictly increasing list of sweep points. Text forms:
//   "lin:a:b:n"   n >= 2 evenly spaced points on [a, b]
//   "log:a:b:n"   n >= 2 geometrically spaced points, 0 < a < b
//   "list:v,..."  explicit comma-separated values (one allowed)
//   "v,..."       bare comma-separated values, same as list:
struct GridSpec {
    std::vector<double> points;

    static GridSpec linear(double lo, double hi, int n);
    static GridSpec geometric(double lo, double hi, int n);
    static GridSpec explicit_list(std::vector<double> values);
    static GridSpec parse(const std::string& text);
};

// One sweep-run description: model parameters, what varies, over which grid,
// which engine evaluates each point, and where the CSV goes (empty = return
// the table only).
enum class SweepVariable { alpha, delta, d_t, time };

struct SweepConfig {
    VModelParams params{};
    SweepVariable variable{SweepVariable::time};
    GridSpec grid{};
    EngineKind engine{EngineKind::nonsecular};
    std::string out_path{};

    // rectification only: the alpha values scanned for each temperature bias
    GridSpec alpha_grid{};
    // thermodynamic audit only: horizon override; 0 keeps the per-alpha
    // defaults (2e8 at alpha = 1, where the slow coherence mode must die out;
    // 1e5 otherwise)
    double t_end_override{0.0};
};

// ---------------------------------------------------------------------------
// Rows and tables.
// ---------------------------------------------------------------------------

// The standard observable set reported at one sweep point.
struct ResultRow {
    double sweep_value{0.0};
    double s22{0.0}, s33{0.0}, s11{0.0};
    double s32_re{0.0}, s32_im{0.0};
    double j_h{0.0}, j_c{0.0};
    double entropy_rate{0.0};
    double min_eigenvalue{0.0};
};

// All fields finite and populations consistent with unit trace within 1e-8;
// throws InvariantViolation otherwise.
void validate_row(const ResultRow& row);

// Steady-state observables at the given parameters under the given engine.
ResultRow steady_row(const VModelParams& params, EngineKind engine, double sweep_value);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// One-line header, comma separator, 12 significant digits, every row
// newline-terminated. Deterministic for identical input.
std::string to_csv(const Table& table);
void write_csv(const Table& table, const std::string& path);

// ---------------------------------------------------------------------------
// Sweep drivers (one per CLI subcommand).
// ---------------------------------------------------------------------------

// Time evolution from the ground state sampled on config.grid (time points,
// first >= 0). Engine must be nonsecular or secular. Columns: t plus the
// ResultRow observable set.
Table run_transient(const SweepConfig& config);

// Steady observables per alpha under config.engine, with the secular-engine,
// closed-form, and reduced-linear-solve comparison columns side by side.
Table run_sweep_alpha(const SweepConfig& config);

// Steady hot-bath current versus splitting at alpha = -1 and alpha = +1
// (interference-locked vs interference-free arm), per config.engine.
Table run_sweep_delta(const SweepConfig& config);

// Rectification scan: for each alpha in config.alpha_grid and each
// temperature bias dT in config.grid (|dT| < 1e-12 skipped), hold the mean
// temperature (t_hot + t_cold)/2 fixed, apply T = mean +- dT/2, swap the two
// baths for the reverse run, and report R = |j_forward / j_reverse|.
Table run_rectify(const SweepConfig& config);

// ---------------------------------------------------------------------------
// Thermodynamic audit.
// ---------------------------------------------------------------------------

// Pass/fail audit of one trajectory from the ground state: entropy production
// rate >= -1e-10 at every sample, eigenvalues within [-1e-10, 1 + 1e-10],
// eigenvalue sum within 1e-8 of 1, |j_h + j_c| <= 1e-8 at the final sample,
// and the final state within 1e-6 (max abs) of the directly solved steady
// state. Integration or positivity errors are reported as failures, not
// propagated.
struct TrajectoryAudit {
    bool passed{false};
    std::string detail;                 // one line, empty when passed
    double min_entropy_rate{0.0};
    double min_eigenvalue{0.0};
    double max_eigenvalue_sum_error{0.0};
    double final_current_sum{0.0};
    double final_state_gap{0.0};        // max abs deviation from the steady state
};

TrajectoryAudit audit_trajectory(const RedfieldGenerator& gen,
                                 const std::vector<double>& times);

// Audit at alpha in {-1, 0.5, 1} by default (overridable for quick runs):
// per-sample rows plus a human-readable summary; passed = every audit clean.
struct ThermoReport {
    Table table;
    bool passed{false};
    std::string summary;
};

ThermoReport run_thermo_check(const SweepConfig& config,
                              const std::vector<double>& alphas = {-1.0, 0.5, 1.0});

}  // namespace vheat
