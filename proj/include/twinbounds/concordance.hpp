#pragma once

#include <cstdint>

namespace twinbounds {

/// Probandwise concordances of the exposure and outcome traits, each in (0,1].
struct ConcordanceSpec {
    double bc_e = 1.0;
    double bc_d = 1.0;

    /// Throws InvalidInput unless both values lie in (0,1].
    void validate() const;
};

/// Raw monozygotic twin-pair counts for one trait.
struct TwinCounts {
    std::uint64_t n_pairs = 0;
    std::uint64_t both = 0;     // C
    std::uint64_t one = 0;      // D
    std::uint64_t neither = 0;  // U

    static TwinCounts from_cdu(std::uint64_t both, std::uint64_t one, std::uint64_t neither) {
        return {both + one + neither, both, one, neither};
    }
};

struct TwinStats {
    double bc = 0.0;          // probandwise, 2C/(2C+D)
    double pc = 0.0;          // pairwise, C/(C+D)
    double v = 0.0;           // homogeneous pairs, (U+C)/n
    double trait_mean = 0.0;  // (2C+D)/(2n)
};

/// Right-hand side of the propensity-variance inequality for one trait.
struct VarianceCap {
    double trait_mean = 0.0;
    double cap = 0.0;
};

/// Pairwise -> probandwise: 2pc/(1+pc). Throws InvalidInput outside [0,1].
double pc_to_bc(double pc);

/// Probandwise -> pairwise: bc/(2-bc). Throws InvalidInput outside [0,1].
double bc_to_pc(double bc);

/// Throws InvalidInput if the counts do not add up, TraitAbsent if 2C+D = 0.
TwinStats twin_stats(const TwinCounts& counts);

/// cap = trait_mean * (bc - trait_mean).
///
/// A concordance below the trait prevalence contradicts the twin assumption
/// for this population (the cap would be negative), so it is reported as
/// InconsistentConcordance rather than clamped. bc == trait_mean is accepted
/// and yields a zero cap.
VarianceCap variance_cap(double bc, double trait_mean);

}  // namespace twinbounds
