// vheat — command-line front end: transient runs, alpha/splitting/bias sweeps,
// rectification scans, and the trajectory-level thermodynamic audit, all
// emitted as CSV.
//
// Exit codes: 0 success, 1 invariant violation (including a failed audit),
// 2 numerical failure, 3 bad input.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vheat/sweep.hpp"
#include "vheat/types.hpp"

namespace {

struct CliValues {
    double nu{1.0};
    double delta{1e-4};
    double alpha{1.0};
    double t_hot{4.0};
    double t_cold{2.0};
    double gamma{0.0071};
    std::string engine{"nonsecular"};
    std::string grid;  // empty -> per-subcommand default
    std::string out;   // empty -> per-subcommand default
    std::string alpha_grid{"lin:-1:1:11"};
    double t_end_override{0.0};
};

vheat::SweepConfig make_config(const CliValues& v, vheat::SweepVariable variable,
                               const char* default_grid, const char* default_out) {
    vheat::SweepConfig config;
    config.params =
        vheat::VModelParams{v.nu, v.delta, v.alpha, v.t_hot, v.t_cold, v.gamma};
    config.variable = variable;
    config.engine = vheat::parse_engine(v.engine);
    config.grid = vheat::GridSpec::parse(v.grid.empty() ? default_grid : v.grid);
    config.out_path = v.out.empty() ? default_out : v.out;
    config.t_end_override = v.t_end_override;
    return config;
}

void report_written(const vheat::Table& table, const std::string& path) {
    vheat::write_csv(table, path);
    std::cout << "wrote " << path << " (" << table.rows.size() << " rows, "
              << table.columns.size() << " columns)\n";
}

int cmd_transient(const CliValues& v) {
    const vheat::SweepConfig config =
        make_config(v, vheat::SweepVariable::time, "lin:0:1000:201", "transient.csv");
    report_written(vheat::run_transient(config), config.out_path);
    return 0;
}

int cmd_sweep_alpha(const CliValues& v) {
    const vheat::SweepConfig config =
        make_config(v, vheat::SweepVariable::alpha, "lin:-3:3:41", "sweep_alpha.csv");
    report_written(vheat::run_sweep_alpha(config), config.out_path);
    return 0;
}

int cmd_sweep_delta(const CliValues& v) {
    const vheat::SweepConfig config = make_config(v, vheat::SweepVariable::delta,
                                                  "log:1e-6:1e-1:26", "sweep_delta.csv");
    report_written(vheat::run_sweep_delta(config), config.out_path);
    return 0;
}

int cmd_rectify(const CliValues& v) {
    vheat::SweepConfig config =
        make_config(v, vheat::SweepVariable::d_t, "lin:-5:5:21", "rectify.csv");
    config.alpha_grid = vheat::GridSpec::parse(v.alpha_grid);
    report_written(vheat::run_rectify(config), config.out_path);
    return 0;
}

int cmd_thermo_check(const CliValues& v) {
    const vheat::SweepConfig config = make_config(v, vheat::SweepVariable::time,
                                                  "list:0", "thermo_check.csv");
    const vheat::ThermoReport report = vheat::run_thermo_check(config);
    vheat::write_csv(report.table, config.out_path);
    std::cout << report.summary;
    std::cout << "wrote " << config.out_path << " (" << report.table.rows.size()
              << " rows)\n";
    return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "vheat: heat transport through a three-level V system between two "
        "thermal baths.\nSubcommands write CSV (one-line header, 12 significant "
        "digits); identical inputs give byte-identical files."};
    app.require_subcommand(1);
    app.fallthrough(true);
    app.set_config("--config", "",
                   "flat key=value file for the shared options; command-line flags "
                   "override the file");

    CliValues v;
    app.add_option("--nu", v.nu, "ground-to-upper-level gap (energy units)")
        ->capture_default_str();
    app.add_option("--delta", v.delta, "excited-state splitting (>= 0, < nu)")
        ->capture_default_str();
    app.add_option("--alpha", v.alpha, "cold-arm interference amplitude")
        ->capture_default_str();
    app.add_option("--t-hot", v.t_hot, "hot bath temperature (> 0)")
        ->capture_default_str();
    app.add_option("--t-cold", v.t_cold, "cold bath temperature (> 0)")
        ->capture_default_str();
    app.add_option("--gamma", v.gamma, "dimensionless system-bath coupling (>= 0)")
        ->capture_default_str();
    app.add_option("--engine", v.engine,
                   "nonsecular | secular | analytic | quasi-degenerate-linear")
        ->capture_default_str();
    app.add_option("--grid", v.grid,
                   "sweep grid: lin:a:b:n | log:a:b:n | list:v,... | v,... "
                   "(default depends on the subcommand)");
    app.add_option("--out", v.out, "output CSV path (default depends on the subcommand)");

    CLI::App* transient = app.add_subcommand(
        "transient", "time evolution from the ground state (grid = times)");
    CLI::App* sweep_alpha = app.add_subcommand(
        "sweep-alpha",
        "steady observables vs alpha, with secular/closed-form/linear-solve columns");
    CLI::App* sweep_delta = app.add_subcommand(
        "sweep-delta", "steady hot current vs splitting at alpha = -1 and +1");
    CLI::App* rectify = app.add_subcommand(
        "rectify",
        "rectification ratio |j_fwd/j_rev| vs temperature bias (grid = biases)");
    rectify->add_option("--alpha-grid", v.alpha_grid, "alpha values scanned")
        ->capture_default_str();
    CLI::App* thermo = app.add_subcommand(
        "thermo-check",
        "trajectory audit at alpha in {-1, 0.5, 1}: entropy rate, eigenvalue bounds, "
        "energy balance; exit 1 on violation");
    thermo
        ->add_option("--t-end", v.t_end_override,
                     "audit horizon override (0 = per-alpha default: 2e8 at alpha=1, "
                     "1e5 otherwise)")
        ->capture_default_str();
    for (CLI::App* sub : {transient, sweep_alpha, sweep_delta, rectify, thermo}) {
        sub->fallthrough(true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 3;
    }

    try {
        if (app.got_subcommand(transient)) return cmd_transient(v);
        if (app.got_subcommand(sweep_alpha)) return cmd_sweep_alpha(v);
        if (app.got_subcommand(sweep_delta)) return cmd_sweep_delta(v);
        if (app.got_subcommand(rectify)) return cmd_rectify(v);
        if (app.got_subcommand(thermo)) return cmd_thermo_check(v);
        std::cerr << "bad input: no subcommand selected\n";
        return 3;
    } catch (const vheat::InvariantViolation& err) {
        std::cerr << "invariant violation: " << err.what() << "\n";
        return 1;
    } catch (const vheat::IntegrationError& err) {
        std::cerr << "numerical failure: " << err.what() << " (last good time "
                  << err.last_good_time << ")\n";
        return 2;
    } catch (const vheat::SingularSystemError& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return 2;
    } catch (const vheat::NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "bad input: " << err.what() << "\n";
        return 3;
    } catch (const std::domain_error& err) {
        std::cerr << "bad input: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return 2;
    }
}
