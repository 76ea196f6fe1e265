// Command-line front end: analyze, bootstrap, convert-concordance, simulate.
// Reports go to stdout; diagnostics go to stderr.

#include "twinbounds/app.hpp"
#include "twinbounds/error.hpp"
#include "twinbounds/solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace twinbounds;
using app::Json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct AnalyzeFlags {
    std::string config;
    std::string table_csv;
    std::size_t grid = 0;
    std::string estimand;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t replicates = 0;
    bool pretty = false;
    bool timing = false;
    std::string dump_lp;
    std::string witness_out;
};

app::AnalyzeConfig load_analyze(const AnalyzeFlags& flags) {
    app::AnalyzeConfig config = app::parse_analyze_config(read_file(flags.config));
    if (!flags.table_csv.empty()) config.table = parse_table_csv(read_file(flags.table_csv));
    if (flags.grid > 0) config.grid = flags.grid;
    if (!flags.estimand.empty()) config.estimand = parse_estimand(flags.estimand);
    return config;
}

void write_masses(std::ostream& out, const std::optional<DiscreteDistribution>& w) {
    if (!w) {
        out << "null";
        return;
    }
    out << '[';
    const auto m = w->masses();
    for (std::size_t k = 0; k < m.size(); ++k) out << (k ? "," : "") << m[k];
    out << ']';
}

int run_analyze_command(const AnalyzeFlags& flags, bool bootstrap) {
    const auto start = std::chrono::steady_clock::now();
    app::AnalyzeConfig config = load_analyze(flags);
    if (bootstrap) {
        BootstrapConfig b = config.bootstrap.value_or(BootstrapConfig{});
        if (flags.seed_given) b.seed = flags.seed;
        if (flags.replicates > 0) b.replicates = flags.replicates;
        config.bootstrap = b;
    }

    if (!flags.dump_lp.empty()) {
        const auto grid = std::make_shared<const Grid>(build_grid(config.grid));
        auto problem = IdentificationProblem::make(table_to_frequencies(config.table), config.concordance(), grid,
                                                   config.estimand == EstimandKind::RatioAte ? EstimandKind::Ate
                                                                                             : config.estimand);
        std::ofstream out(flags.dump_lp);
        write_lp_text(assemble_lp(problem, Sense::Minimize), out);
    }

    app::RunOptions options;
    options.run_bootstrap = bootstrap;
    app::AnalyzeOutcome outcome = app::run_analyze(config, options);
    if (flags.timing) {
        app::set_wall_clock(outcome.report,
                            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }

    if (!flags.witness_out.empty()) {
        std::ofstream out(flags.witness_out);
        out << std::setprecision(17) << "{\"grid\":" << config.grid << ",\"witness_min\":";
        write_masses(out, outcome.bounds.witness_min);
        out << ",\"witness_max\":";
        write_masses(out, outcome.bounds.witness_max);
        out << "}\n";
    }

    if (flags.pretty) std::cout << app::pretty_analyze(outcome.report);
    else std::cout << outcome.report.dump(2) << '\n';

    if (outcome.exit_code == app::kExitInfeasible) {
        std::cerr << "infeasible: " << outcome.report["diagnostics"]["message"].get<std::string>() << '\n';
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Partial identification of average treatment effects from a 2x2 table and twin concordances"};
    cli.require_subcommand(1);
    cli.set_version_flag("--version", std::string(app::kToolVersion));

    AnalyzeFlags analyze_flags;
    auto add_common = [](CLI::App* sub, AnalyzeFlags& f) {
        sub->add_option("--config", f.config, "analysis config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--table-csv", f.table_csv, "override the table with a CSV file (header e0_d0,e0_d1,e1_d0,e1_d1)")
            ->check(CLI::ExistingFile);
        sub->add_option("--grid", f.grid, "cells per axis (overrides config)")->check(CLI::PositiveNumber);
        sub->add_option("--estimand", f.estimand, "ate | causality_present | ratio_ate");
        sub->add_flag("--pretty", f.pretty, "human-readable summary instead of JSON");
        sub->add_flag("--timing", f.timing, "record wall-clock seconds in the report");
        sub->add_option("--dump-lp", f.dump_lp, "write the minimization program as plain text");
        sub->add_option("--witness-out", f.witness_out, "write full witness mass vectors (JSON)");
    };
    CLI::App* analyze = cli.add_subcommand("analyze", "bound the estimand for one table");
    add_common(analyze, analyze_flags);

    AnalyzeFlags boot_flags;
    CLI::App* bootstrap = cli.add_subcommand("bootstrap", "analyze plus multinomial resampling of the table");
    add_common(bootstrap, boot_flags);
    bootstrap->add_option("--seed", boot_flags.seed, "resampling seed (overrides config)")
        ->each([&](const std::string&) { boot_flags.seed_given = true; });
    bootstrap->add_option("--replicates", boot_flags.replicates, "number of resamples (overrides config)")
        ->check(CLI::PositiveNumber);

    double pc_value = -1.0;
    double bc_value = -1.0;
    CLI::App* convert = cli.add_subcommand("convert-concordance", "convert between pairwise and probandwise concordance");
    auto* pc_opt = convert->add_option("--pc", pc_value, "pairwise concordance -> probandwise");
    auto* bc_opt = convert->add_option("--bc", bc_value, "probandwise concordance -> pairwise");
    pc_opt->excludes(bc_opt);
    convert->require_option(1);

    std::string sim_config;
    std::uint64_t sim_seed = 0;
    bool sim_seed_given = false;
    bool sim_pretty = false;
    bool sim_timing = false;
    CLI::App* simulate = cli.add_subcommand("simulate", "coverage check on a synthetic data-generating process");
    simulate->add_option("--config", sim_config, "simulation spec (JSON)")->required()->check(CLI::ExistingFile);
    simulate->add_option("--seed", sim_seed, "base seed (overrides spec)")
        ->each([&](const std::string&) { sim_seed_given = true; });
    simulate->add_flag("--pretty", sim_pretty, "human-readable summary instead of JSON");
    simulate->add_flag("--timing", sim_timing, "record wall-clock seconds in the report");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::kExitInputError;
    }

    try {
        if (*analyze) return run_analyze_command(analyze_flags, false);
        if (*bootstrap) return run_analyze_command(boot_flags, true);
        if (*convert) {
            const double out = *pc_opt ? pc_to_bc(pc_value) : bc_to_pc(bc_value);
            std::cout << std::fixed << std::setprecision(4) << out << '\n';
            return 0;
        }
        if (*simulate) {
            const auto start = std::chrono::steady_clock::now();
            app::SimulateConfig config = app::parse_simulate_config(read_file(sim_config));
            if (sim_seed_given) config.spec.population.seed = sim_seed;
            app::SimulateOutcome outcome = app::run_simulate(config);
            if (sim_timing) {
                app::set_wall_clock(outcome.report,
                                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            }
            if (sim_pretty) std::cout << app::pretty_simulate(outcome.report);
            else std::cout << outcome.report.dump(2) << '\n';
            return outcome.exit_code;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        if (e.kind() == ErrorKind::InconsistentConcordance) {
            std::cerr << "hint: use a probandwise concordance at least as large as the trait prevalence;"
                         " pairwise rates must be given as pc_e/pc_d so they are converted\n";
        }
        if (e.kind() == ErrorKind::DegenerateReport) return app::kExitInfeasible;
        return app::kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::kExitInputError;
    }
    return app::kExitInputError;
}
