#include "twinbounds/sensitivity.hpp"

#include "twinbounds/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace twinbounds {

void BootstrapConfig::validate() const {
    if (replicates < 1) throw Error(ErrorKind::InvalidInput, "bootstrap needs at least one replicate");
}

std::vector<std::string> small_cell_flags(const ContingencyTable& table, std::uint64_t threshold) {
    std::vector<std::string> flagged;
    const std::array<std::pair<const char*, std::uint64_t>, 4> cells{{
        {"e0_d0", table.n_e0_d0},
        {"e0_d1", table.n_e0_d1},
        {"e1_d0", table.n_e1_d0},
        {"e1_d1", table.n_e1_d1},
    }};
    for (const auto& [name, count] : cells) {
        if (count < threshold) flagged.emplace_back(name);
    }
    return flagged;
}

ContingencyTable resample_table(const ContingencyTable& table, Engine& engine) {
    const std::array<std::uint64_t, 4> counts{table.n_e0_d0, table.n_e0_d1, table.n_e1_d0, table.n_e1_d1};
    const std::uint64_t total = table.total();
    std::array<std::uint64_t, 4> drawn{};
    // Sequential conditional binomials.
    std::uint64_t remaining_trials = total;
    std::uint64_t remaining_weight = total;
    for (std::size_t i = 0; i < 3; ++i) {
        if (remaining_trials == 0 || remaining_weight == 0) break;
        const double p = std::min(1.0, static_cast<double>(counts[i]) / static_cast<double>(remaining_weight));
        std::binomial_distribution<std::uint64_t> binom(remaining_trials, p);
        drawn[i] = binom(engine);
        remaining_trials -= drawn[i];
        remaining_weight -= counts[i];
    }
    drawn[3] = remaining_trials;
    return {drawn[0], drawn[1], drawn[2], drawn[3]};
}

double percentile(std::span<const double> sorted_values, double q) {
    if (sorted_values.empty()) throw Error(ErrorKind::InvalidInput, "percentile of an empty sample");
    const double pos = q * static_cast<double>(sorted_values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

namespace {

PercentileSummary summarize(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return {percentile(values, 0.025), percentile(values, 0.5), percentile(values, 0.975)};
}

}  // namespace

BootstrapReport bootstrap_bounds(const ContingencyTable& table, const ConcordanceSpec& concordance,
                                 std::shared_ptr<const Grid> grid, EstimandKind estimand,
                                 const BootstrapConfig& config, const SolverOptions& options) {
    config.validate();
    concordance.validate();
    table_to_frequencies(table);

    BootstrapReport report;
    report.small_cells = small_cell_flags(table, config.threshold);
    report.replicates.resize(config.replicates);
    for (std::size_t b = 0; b < config.replicates; ++b) {
        Engine engine = stream_engine(config.seed, b);
        BootstrapReplicate& rep = report.replicates[b];
        rep.table = resample_table(table, engine);
        try {
            const auto problem =
                IdentificationProblem::make(table_to_frequencies(rep.table), concordance, grid, estimand);
            const BoundsResult bounds = solve_bounds(problem, options);
            rep.status = to_string(bounds.status);
            if (bounds.solved()) {
                rep.lower = bounds.lower;
                rep.upper = bounds.upper;
            } else {
                rep.error = bounds.diagnostics.infeasibility_cause.empty() ? bounds.diagnostics.message
                                                                          : bounds.diagnostics.infeasibility_cause;
            }
        } catch (const Error& e) {
            rep.status = "invalid";
            rep.error = std::string(to_string(e.kind()));
        }
    }

    std::vector<double> lowers;
    std::vector<double> uppers;
    for (const auto& rep : report.replicates) {
        if (rep.status == "solved") {
            ++report.solved;
            lowers.push_back(rep.lower);
            uppers.push_back(rep.upper);
        } else if (rep.status == "infeasible") {
            ++report.infeasible;
        } else {
            ++report.failed;
        }
    }
    if (report.solved == 0) {
        throw Error(ErrorKind::DegenerateReport,
                    "no bootstrap replicate produced bounds (" + std::to_string(report.infeasible) +
                        " infeasible, " + std::to_string(report.failed) + " failed)");
    }
    report.lower = summarize(std::move(lowers));
    report.upper = summarize(std::move(uppers));
    return report;
}

}  // namespace twinbounds
