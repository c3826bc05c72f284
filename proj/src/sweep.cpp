#include "vheat/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vheat/analytic.hpp"
#include "vheat/vmodel.hpp"

namespace vheat {

// ---------------------------------------------------------------------------
// Engines.
// ---------------------------------------------------------------------------

EngineKind parse_engine(const std::string& name) {
    if (name == "nonsecular") return EngineKind::nonsecular;
    if (name == "secular") return EngineKind::secular;
    if (name == "analytic") return EngineKind::analytic;
    if (name == "quasi-degenerate-linear" || name == "quasi_degenerate_linear") {
        return EngineKind::quasi_degenerate_linear;
    }
    throw std::invalid_argument(
        "parse_engine: unknown engine '" + name +
        "' (expected nonsecular, secular, analytic, quasi-degenerate-linear)");
}

std::string engine_name(EngineKind engine) {
    switch (engine) {
        case EngineKind::nonsecular: return "nonsecular";
        case EngineKind::secular: return "secular";
        case EngineKind::analytic: return "analytic";
        case EngineKind::quasi_degenerate_linear: return "quasi-degenerate-linear";
    }
    throw std::logic_error("engine_name: unreachable");
}

// ---------------------------------------------------------------------------
// Grids.
// ---------------------------------------------------------------------------

namespace {

double parse_double_token(const std::string& token, const char* what) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != token.size() || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("GridSpec: cannot parse ") + what +
                                    " '" + token + "'");
    }
    return value;
}

int parse_count_token(const std::string& token) {
    std::size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(token, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != token.size() || value < 1 || value > 10'000'000) {
        throw std::invalid_argument("GridSpec: bad point count '" + token + "'");
    }
    return static_cast<int>(value);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t stop = text.find(sep, start);
        out.push_back(text.substr(start, stop - start));
        if (stop == std::string::npos) break;
        start = stop + 1;
    }
    return out;
}

}  // namespace

GridSpec GridSpec::linear(double lo, double hi, int n) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
        throw std::invalid_argument("GridSpec::linear: need finite bounds with hi > lo");
    }
    if (n < 2) throw std::invalid_argument("GridSpec::linear: need n >= 2");
    GridSpec grid;
    grid.points.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        grid.points[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }
    grid.points.front() = lo;
    grid.points.back() = hi;
    return grid;
}

GridSpec GridSpec::geometric(double lo, double hi, int n) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && hi > lo)) {
        throw std::invalid_argument(
            "GridSpec::geometric: need finite bounds with 0 < lo < hi");
    }
    if (n < 2) throw std::invalid_argument("GridSpec::geometric: need n >= 2");
    GridSpec grid;
    grid.points.resize(static_cast<std::size_t>(n));
    const double ratio = hi / lo;
    for (int i = 0; i < n; ++i) {
        grid.points[static_cast<std::size_t>(i)] =
            lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
    }
    grid.points.front() = lo;
    grid.points.back() = hi;
    return grid;
}

GridSpec GridSpec::explicit_list(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("GridSpec::explicit_list: empty grid");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("GridSpec::explicit_list: non-finite value");
        }
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw std::invalid_argument(
                "GridSpec::explicit_list: values must be strictly increasing");
        }
    }
    GridSpec grid;
    grid.points = std::move(values);
    return grid;
}

GridSpec GridSpec::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("GridSpec: empty specification");
    const auto ranged = [&](const char* kind) -> std::vector<std::string> {
        const std::vector<std::string> fields = split(text.substr(4), ':');
        if (fields.size() != 3) {
            throw std::invalid_argument(std::string("GridSpec: expected ") + kind +
                                        ":lo:hi:n, got '" + text + "'");
        }
        return fields;
    };
    if (text.rfind("lin:", 0) == 0) {
        const std::vector<std::string> f = ranged("lin");
        return linear(parse_double_token(f[0], "bound"), parse_double_token(f[1], "bound"),
                      parse_count_token(f[2]));
    }
    if (text.rfind("log:", 0) == 0) {
        const std::vector<std::string> f = ranged("log");
        return geometric(parse_double_token(f[0], "bound"),
                         parse_double_token(f[1], "bound"), parse_count_token(f[2]));
    }
    std::string body = text;
    if (text.rfind("list:", 0) == 0) body = text.substr(5);
    std::vector<double> values;
    for (const std::string& token : split(body, ',')) {
        values.push_back(parse_double_token(token, "grid value"));
    }
    return explicit_list(std::move(values));
}

// ---------------------------------------------------------------------------
// Rows and tables.
// ---------------------------------------------------------------------------

void validate_row(const ResultRow& row) {
    const double fields[] = {row.sweep_value, row.s22,     row.s33,
                             row.s11,         row.s32_re,  row.s32_im,
                             row.j_h,         row.j_c,     row.entropy_rate,
                             row.min_eigenvalue};
    for (double f : fields) {
        if (!std::isfinite(f)) {
            throw InvariantViolation("validate_row: non-finite observable");
        }
    }
    const double trace = row.s11 + row.s22 + row.s33;
    if (std::abs(trace - 1.0) > 1e-8) {
        std::ostringstream msg;
        msg << "validate_row: populations sum to " << trace << ", not 1 within 1e-8";
        throw InvariantViolation(msg.str());
    }
}

namespace {

Eigen::MatrixXcd reconstruct_state(double s22, double s33, double s32_re, double s32_im) {
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(3, 3);
    sigma(0, 0) = 1.0 - s22 - s33;
    sigma(1, 1) = s22;
    sigma(2, 2) = s33;
    sigma(2, 1) = complex(s32_re, s32_im);
    sigma(1, 2) = complex(s32_re, -s32_im);
    return sigma;
}

ResultRow observable_row(const RedfieldGenerator& gen, const Eigen::MatrixXcd& state,
                         double sweep_value) {
    ResultRow row;
    row.sweep_value = sweep_value;
    row.s22 = state(1, 1).real();
    row.s33 = state(2, 2).real();
    row.s11 = state(0, 0).real();
    row.s32_re = state(2, 1).real();
    row.s32_im = state(2, 1).imag();
    row.j_h = heat_current(gen, 0, state);
    row.j_c = heat_current(gen, 1, state);
    row.entropy_rate = entropy_production_rate(gen, state);
    row.min_eigenvalue = rdm_eigenvalues(state).front();
    validate_row(row);
    return row;
}

RedfieldGenerator model_generator(const VModelParams& params, GeneratorMode mode) {
    const VModel model = build_vmodel(params);
    return build_generator(model.system, model.baths(), mode);
}

std::vector<double> row_vector(const ResultRow& r) {
    return {r.sweep_value, r.s22,    r.s33, r.s11,          r.s32_re,
            r.s32_im,      r.j_h,    r.j_c, r.entropy_rate, r.min_eigenvalue};
}

const std::vector<std::string> kRowColumns = {
    "s22", "s33", "s11", "s32_re", "s32_im",
    "j_h", "j_c", "entropy_rate", "min_eigenvalue"};

std::vector<std::string> with_leading(const std::string& first) {
    std::vector<std::string> cols{first};
    cols.insert(cols.end(), kRowColumns.begin(), kRowColumns.end());
    return cols;
}

}  // namespace

ResultRow steady_row(const VModelParams& params, EngineKind engine, double sweep_value) {
    params.validate();
    switch (engine) {
        case EngineKind::nonsecular:
        case EngineKind::secular: {
            const GeneratorMode mode = engine == EngineKind::nonsecular
                                           ? GeneratorMode::nonsecular
                                           : GeneratorMode::secular;
            const RedfieldGenerator gen = model_generator(params, mode);
            return observable_row(gen, steady_state(gen), sweep_value);
        }
        case EngineKind::analytic: {
            const Populations p = populations_ss(params);
            const double re = coherence_re_ss(params);
            const double im = coherence_im_ss(params);
            ResultRow row;
            row.sweep_value = sweep_value;
            row.s22 = p.s22;
            row.s33 = p.s33;
            row.s11 = p.s11;
            row.s32_re = re;
            row.s32_im = im;
            row.j_h = current_ss(params);
            row.j_c = -row.j_h;  // steady state: no net energy accumulation
            row.entropy_rate = row.j_h * (1.0 / params.t_cold - 1.0 / params.t_hot);
            row.min_eigenvalue =
                rdm_eigenvalues(reconstruct_state(p.s22, p.s33, re, im)).front();
            validate_row(row);
            return row;
        }
        case EngineKind::quasi_degenerate_linear: {
            const QuasiDegenerateState q = solve_quasi_degenerate_ss(params);
            const Eigen::MatrixXcd sigma =
                reconstruct_state(q.s22, q.s33, q.s32_re, q.s32_im);
            // Observables through the full generator: the reduced solve fixes
            // the state, the generator supplies currents and entropy flow.
            const RedfieldGenerator gen = model_generator(params, GeneratorMode::nonsecular);
            return observable_row(gen, sigma, sweep_value);
        }
    }
    throw std::logic_error("steady_row: unreachable");
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out.push_back(',');
        out += table.columns[c];
    }
    out.push_back('\n');
    char buf[40];
    for (const std::vector<double>& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw std::logic_error("to_csv: row width does not match header");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out.push_back(',');
            double v = row[c];
            if (v == 0.0) v = 0.0;  // collapse negative zero
            std::snprintf(buf, sizeof buf, "%.12g", v);
            out += buf;
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const Table& table, const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::invalid_argument("write_csv: cannot open '" + path + "' for writing");
    }
    file << to_csv(table);
    file.flush();
    if (!file) {
        throw std::runtime_error("write_csv: write to '" + path + "' failed");
    }
}

// ---------------------------------------------------------------------------
// Sweep drivers.
// ---------------------------------------------------------------------------

Table run_transient(const SweepConfig& config) {
    if (config.engine != EngineKind::nonsecular && config.engine != EngineKind::secular) {
        throw std::invalid_argument(
            "run_transient: engine must be nonsecular or secular (time propagation)");
    }
    config.params.validate();
    const GeneratorMode mode = config.engine == EngineKind::nonsecular
                                   ? GeneratorMode::nonsecular
                                   : GeneratorMode::secular;
    const RedfieldGenerator gen = model_generator(config.params, mode);
    const Trajectory traj =
        integrate_at(gen, ground_state_density(3), config.grid.points);

    Table table;
    table.columns = with_leading("t");
    table.rows.reserve(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const ResultRow row = observable_row(gen, traj.states[i], traj.times[i]);
        table.rows.push_back(row_vector(row));
    }
    return table;
}

Table run_sweep_alpha(const SweepConfig& config) {
    config.params.validate();
    Table table;
    table.columns = with_leading("alpha");
    const std::vector<std::string> extra = {
        "s22_secular", "s33_secular",       "j_h_secular",      "s32_re_closed",
        "j_h_closed",  "j_h_secular_closed", "s32_re_linear"};
    table.columns.insert(table.columns.end(), extra.begin(), extra.end());

    table.rows.reserve(config.grid.points.size());
    for (double alpha : config.grid.points) {
        VModelParams p = config.params;
        p.alpha = alpha;
        std::vector<double> row = row_vector(steady_row(p, config.engine, alpha));

        const ResultRow sec = steady_row(p, EngineKind::secular, alpha);
        row.push_back(sec.s22);
        row.push_back(sec.s33);
        row.push_back(sec.j_h);
        row.push_back(coherence_re_ss(p));
        row.push_back(current_ss(p));
        row.push_back(secular_current_ss(p));
        row.push_back(solve_quasi_degenerate_ss(p).s32_re);
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table run_sweep_delta(const SweepConfig& config) {
    config.params.validate();
    Table table;
    table.columns = {"delta", "j_h_alpha_minus1", "j_h_alpha_plus1"};
    table.rows.reserve(config.grid.points.size());
    for (double delta : config.grid.points) {
        VModelParams p = config.params;
        p.delta = delta;
        VModelParams destructive = p;
        destructive.alpha = -1.0;
        VModelParams constructive = p;
        constructive.alpha = 1.0;
        table.rows.push_back({delta,
                              steady_row(destructive, config.engine, delta).j_h,
                              steady_row(constructive, config.engine, delta).j_h});
    }
    return table;
}

Table run_rectify(const SweepConfig& config) {
    config.params.validate();
    if (config.alpha_grid.points.empty()) {
        throw std::invalid_argument("run_rectify: alpha grid is empty");
    }
    const double t_mean = 0.5 * (config.params.t_hot + config.params.t_cold);
    Table table;
    table.columns = {"alpha", "d_t", "t_hot_forward", "t_cold_forward",
                     "j_forward", "j_reverse", "ratio"};
    for (double alpha : config.alpha_grid.points) {
        for (double d_t : config.grid.points) {
            if (std::abs(d_t) < 1e-12) continue;  // R = |0/0| undefined at zero bias
            VModelParams forward = config.params;
            forward.alpha = alpha;
            forward.t_hot = t_mean + 0.5 * d_t;
            forward.t_cold = t_mean - 0.5 * d_t;
            VModelParams reverse = forward;
            std::swap(reverse.t_hot, reverse.t_cold);

            const double j_f = steady_row(forward, config.engine, d_t).j_h;
            const double j_r = steady_row(reverse, config.engine, d_t).j_h;
            if (j_r == 0.0) {
                std::ostringstream msg;
                msg << "run_rectify: reverse current vanishes exactly at alpha=" << alpha
                    << ", dT=" << d_t << "; rectification ratio undefined";
                throw NumericalError(msg.str());
            }
            const double ratio = std::abs(j_f / j_r);
            if (!std::isfinite(ratio)) {
                std::ostringstream msg;
                msg << "run_rectify: non-finite rectification ratio at alpha=" << alpha
                    << ", dT=" << d_t;
                throw NumericalError(msg.str());
            }
            table.rows.push_back({alpha, d_t, forward.t_hot, forward.t_cold, j_f, j_r, ratio});
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Thermodynamic audit.
// ---------------------------------------------------------------------------

namespace {

constexpr double kEntropyFloor = -1e-10;
constexpr double kEigenFloor = -1e-10;
constexpr double kEigenCeil = 1.0 + 1e-10;
constexpr double kEigenSumTol = 1e-8;
constexpr double kFinalCurrentTol = 1e-8;
constexpr double kFinalStateTol = 1e-6;

// Core audit over one integrated trajectory; optionally appends per-sample
// rows (prefixed with alpha_tag) to rows_out.
TrajectoryAudit audit_impl(const RedfieldGenerator& gen, const std::vector<double>& times,
                           std::vector<std::vector<double>>* rows_out, double alpha_tag) {
    TrajectoryAudit audit;
    audit.min_entropy_rate = std::numeric_limits<double>::infinity();
    audit.min_eigenvalue = std::numeric_limits<double>::infinity();

    Trajectory traj;
    try {
        traj = integrate_at(gen, ground_state_density(gen.dim()), times);
    } catch (const std::runtime_error& err) {
        audit.detail = std::string("integration failed: ") + err.what();
        return audit;
    }

    std::ostringstream violations;
    bool ok = true;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Eigen::MatrixXcd& state = traj.states[i];
        double entropy = 0.0;
        try {
            entropy = entropy_production_rate(gen, state);
        } catch (const std::runtime_error& err) {
            audit.detail = std::string("entropy evaluation failed at t=") +
                           std::to_string(traj.times[i]) + ": " + err.what();
            return audit;
        }
        const std::vector<double> eigs = rdm_eigenvalues(state);
        double eig_sum = 0.0;
        for (double e : eigs) eig_sum += e;

        audit.min_entropy_rate = std::min(audit.min_entropy_rate, entropy);
        audit.min_eigenvalue = std::min(audit.min_eigenvalue, eigs.front());
        audit.max_eigenvalue_sum_error =
            std::max(audit.max_eigenvalue_sum_error, std::abs(eig_sum - 1.0));

        if (entropy < kEntropyFloor && ok) {
            violations << "entropy rate " << entropy << " < " << kEntropyFloor
                       << " at t=" << traj.times[i];
            ok = false;
        }
        if ((eigs.front() < kEigenFloor || eigs.back() > kEigenCeil) && ok) {
            violations << "eigenvalue outside [-1e-10, 1+1e-10] at t=" << traj.times[i];
            ok = false;
        }
        if (std::abs(eig_sum - 1.0) > kEigenSumTol && ok) {
            violations << "eigenvalue sum off by " << std::abs(eig_sum - 1.0)
                       << " at t=" << traj.times[i];
            ok = false;
        }
        if (rows_out != nullptr) {
            const ResultRow row = observable_row(gen, state, traj.times[i]);
            std::vector<double> v = row_vector(row);
            v.insert(v.begin(), alpha_tag);
            // replace the generic sweep-value slot with the sample time
            v[1] = traj.times[i];
            v.push_back(eig_sum);
            rows_out->push_back(std::move(v));
        }
    }

    audit.final_current_sum =
        traj.bath_currents[0].back() + traj.bath_currents[1].back();
    if (std::abs(audit.final_current_sum) > kFinalCurrentTol && ok) {
        violations << "final |j_h + j_c| = " << std::abs(audit.final_current_sum)
                   << " > " << kFinalCurrentTol;
        ok = false;
    }
    try {
        const Eigen::MatrixXcd steady = steady_state(gen);
        audit.final_state_gap = (traj.states.back() - steady).cwiseAbs().maxCoeff();
        if (audit.final_state_gap > kFinalStateTol && ok) {
            violations << "final state is " << audit.final_state_gap
                       << " (max abs) from the steady state, > " << kFinalStateTol;
            ok = false;
        }
    } catch (const std::runtime_error& err) {
        if (ok) violations << "steady-state solve failed: " << err.what();
        ok = false;
    }

    audit.passed = ok;
    audit.detail = violations.str();
    return audit;
}

std::vector<double> audit_times(double t_end) {
    std::vector<double> times{0.0};
    if (t_end <= 0.0) throw std::invalid_argument("audit horizon must be > 0");
    if (t_end > 0.1) {
        const GridSpec grid = GridSpec::geometric(0.1, t_end, 61);
        times.insert(times.end(), grid.points.begin(), grid.points.end());
    } else {
        times.push_back(t_end);
    }
    return times;
}

}  // namespace

TrajectoryAudit audit_trajectory(const RedfieldGenerator& gen,
                                 const std::vector<double>& times) {
    return audit_impl(gen, times, nullptr, 0.0);
}

ThermoReport run_thermo_check(const SweepConfig& config,
                              const std::vector<double>& alphas) {
    config.params.validate();
    if (alphas.empty()) {
        throw std::invalid_argument("run_thermo_check: alpha list is empty");
    }
    ThermoReport report;
    report.table.columns = with_leading("alpha");
    report.table.columns.insert(report.table.columns.begin() + 1, "t");
    report.table.columns.push_back("eigenvalue_sum");
    report.passed = true;

    std::ostringstream summary;
    char buf[64];
    for (double alpha : alphas) {
        VModelParams p = config.params;
        p.alpha = alpha;
        const double t_end = config.t_end_override > 0.0
                                 ? config.t_end_override
                                 : (alpha == 1.0 ? 2e8 : 1e5);
        const RedfieldGenerator gen = model_generator(p, GeneratorMode::nonsecular);
        const TrajectoryAudit audit =
            audit_impl(gen, audit_times(t_end), &report.table.rows, alpha);
        std::snprintf(buf, sizeof buf, "%g", alpha);
        summary << "alpha=" << buf << ": ";
        if (audit.passed) {
            summary << "PASS (min entropy rate " << audit.min_entropy_rate
                    << ", min eigenvalue " << audit.min_eigenvalue
                    << ", final |j_h+j_c| " << std::abs(audit.final_current_sum)
                    << ", steady gap " << audit.final_state_gap << ")\n";
        } else {
            summary << "FAIL (" << audit.detail << ")\n";
            report.passed = false;
        }
    }
    summary << "thermo-check: " << (report.passed ? "PASS" : "FAIL") << "\n";
    report.summary = summary.str();
    return report;
}

}  // namespace vheat
