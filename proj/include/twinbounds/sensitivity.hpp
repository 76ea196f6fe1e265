#pragma once

#include "twinbounds/concordance.hpp"
#include "twinbounds/identify.hpp"
#include "twinbounds/random.hpp"
#include "twinbounds/tables.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace twinbounds {

struct BootstrapConfig {
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    std::uint64_t threshold = 100;  // small-cell flag level

    void validate() const;
};

struct BootstrapReplicate {
    ContingencyTable table;
    /// "solved", "infeasible", "numeric-failure", or "invalid" when the
    /// resampled table cannot be turned into a problem (see `error`).
    std::string status;
    double lower = 0.0;
    double upper = 0.0;
    std::string error;
};

struct PercentileSummary {
    double p2_5 = 0.0;
    double p50 = 0.0;
    double p97_5 = 0.0;
};

struct BootstrapReport {
    std::vector<BootstrapReplicate> replicates;
    std::size_t solved = 0;
    std::size_t infeasible = 0;
    std::size_t failed = 0;  // numeric failures and invalid resamples
    std::optional<PercentileSummary> lower;
    std::optional<PercentileSummary> upper;
    std::vector<std::string> small_cells;
};

/// Names of the cells (e0_d0, e0_d1, e1_d0, e1_d1 order) with count < threshold.
std::vector<std::string> small_cell_flags(const ContingencyTable& table, std::uint64_t threshold);

/// Draws a table with the same total from the multinomial over the observed
/// cell frequencies.
ContingencyTable resample_table(const ContingencyTable& table, Engine& engine);

/// Linear interpolation between order statistics (q in [0,1]).
double percentile(std::span<const double> sorted_values, double q);

/// Resamples the table `config.replicates` times and re-solves the bounds,
/// holding the concordances fixed. Throws DegenerateReport if no replicate
/// solves.
BootstrapReport bootstrap_bounds(const ContingencyTable& table, const ConcordanceSpec& concordance,
                                 std::shared_ptr<const Grid> grid, EstimandKind estimand,
                                 const BootstrapConfig& config, const SolverOptions& options = {});

}  // namespace twinbounds
