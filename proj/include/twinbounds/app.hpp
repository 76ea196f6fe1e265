#pragma once

#include "twinbounds/concordance.hpp"
#include "twinbounds/identify.hpp"
#include "twinbounds/oracle.hpp"
#include "twinbounds/sensitivity.hpp"
#include "twinbounds/tables.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

// Config ingestion and report construction shared by the command-line tool
// and the tests. Reports are ordered JSON so key order is stable.
namespace twinbounds::app {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "twinbounds";
inline constexpr std::string_view kToolVersion = TWINBOUNDS_VERSION;

enum ExitCode : int {
    kExitSolved = 0,
    kExitInputError = 1,
    kExitInfeasible = 2,
    kExitNumericFailure = 3,
};

struct AnalyzeConfig {
    ContingencyTable table;
    std::optional<double> bc_e;
    std::optional<double> pc_e;
    std::optional<double> bc_d;
    std::optional<double> pc_d;
    std::size_t grid = 30;
    EstimandKind estimand = EstimandKind::Ate;
    std::optional<BootstrapConfig> bootstrap;
    Json source;  // free-form provenance metadata, echoed verbatim

    /// Probandwise concordances, converting pairwise values where given.
    ConcordanceSpec concordance() const;
};

/// Parses and validates an analyze/bootstrap config. Schema problems throw
/// Error(Schema) with the offending field and, when it can be located, the
/// line it appears on.
AnalyzeConfig parse_analyze_config(std::string_view text);

struct AnalyzeOutcome {
    Json report;
    int exit_code = kExitSolved;
    BoundsResult bounds;
};

struct RunOptions {
    bool run_bootstrap = false;
    /// Wall-clock seconds to record; left null in the report when absent so
    /// that reports are byte-identical across runs.
    std::optional<double> wall_clock_seconds;
};

/// tables -> concordance -> identify (-> sensitivity) -> report. Input
/// errors (including inconsistent concordance) propagate as Error.
AnalyzeOutcome run_analyze(const AnalyzeConfig& config, const RunOptions& options = {});

/// Fills in the wall-clock field of a finished report.
void set_wall_clock(Json& report, std::optional<double> seconds);

/// Human-readable summary with two-decimal bounds.
std::string pretty_analyze(const Json& report);

struct SimulateConfig {
    oracle::CoverageSpec spec;
    Json source;
};

SimulateConfig parse_simulate_config(std::string_view text);

struct SimulateOutcome {
    Json report;
    int exit_code = kExitSolved;
};

/// Exit code 0 when coverage meets the configured threshold, 2 otherwise.
SimulateOutcome run_simulate(const SimulateConfig& config, const RunOptions& options = {});

std::string pretty_simulate(const Json& report);

/// Rounds to `decimals` places, mapping -0 to 0.
double round_to(double value, int decimals);

}  // namespace twinbounds::app
