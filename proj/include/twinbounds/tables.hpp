#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace twinbounds {

/// Counts of a 2x2 exposure (e) by outcome (d) table. Cells are named
/// explicitly so that row/column orientation never has to be guessed.
struct ContingencyTable {
    std::uint64_t n_e0_d0 = 0;
    std::uint64_t n_e0_d1 = 0;
    std::uint64_t n_e1_d0 = 0;
    std::uint64_t n_e1_d1 = 0;

    std::uint64_t total() const noexcept { return n_e0_d0 + n_e0_d1 + n_e1_d0 + n_e1_d1; }

    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

/// Observed relative frequencies of the four cells plus the two margins
/// that the identification constraints are written against.
struct JointFrequencies {
    double p_e0_d1 = 0.0;
    double p_e1_d1 = 0.0;
    double p_e0_d0 = 0.0;
    double p_e1_d0 = 0.0;
    double p_e1 = 0.0;
    double p_d1 = 0.0;

    /// Builds a record from four joint probabilities; margins are derived.
    /// Throws InvalidInput if a value is outside [0,1] or the sum is not 1.
    static JointFrequencies from_joint(double p_e0_d0, double p_e0_d1, double p_e1_d0,
                                       double p_e1_d1);
};

/// Validates the table and returns count/N for each cell.
/// Throws ZeroTotal for an empty table and MarginDegenerate naming the first
/// empty margin (e=0, e=1, d=0, d=1).
JointFrequencies table_to_frequencies(const ContingencyTable& table);

/// Risk ratio P(d=1|e=1) / P(d=1|e=0).
double relative_risk(const JointFrequencies& freqs);

/// Parses a CSV document with header `e0_d0,e0_d1,e1_d0,e1_d1` (any column
/// order) followed by exactly one data row.
ContingencyTable parse_table_csv(std::string_view text);

}  // namespace twinbounds
