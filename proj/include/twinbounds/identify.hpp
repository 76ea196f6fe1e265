#pragma once

#include "twinbounds/concordance.hpp"
#include "twinbounds/grid.hpp"
#include "twinbounds/solver.hpp"
#include "twinbounds/tables.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinbounds {

/// Functional of the unknown (pi, r0, r1) distribution being bounded.
enum class EstimandKind {
    Ate,               // integral of r1 - r0
    CausalityPresent,  // integral of |r1 - r0|
    RatioAte,          // integral of r1 over integral of r0
};

std::string to_string(EstimandKind kind);

/// Accepts "ate", "causality_present", "ratio_ate"; throws InvalidInput otherwise.
EstimandKind parse_estimand(std::string_view name);

struct IdentificationProblem {
    JointFrequencies freqs;
    VarianceCap exposure_cap;  // mean P(e=1)
    VarianceCap risk_cap;      // mean P(d=1)
    std::shared_ptr<const Grid> grid;
    EstimandKind estimand = EstimandKind::Ate;

    /// Computes both caps from the concordances against the observed margins.
    /// Propagates InconsistentConcordance from variance_cap.
    static IdentificationProblem make(const JointFrequencies& freqs, const ConcordanceSpec& concordance,
                                      std::shared_ptr<const Grid> grid,
                                      EstimandKind estimand = EstimandKind::Ate);

    /// Throws InvalidInput if a cap's trait mean disagrees with the margins
    /// (tolerance 1e-12) or the grid is missing.
    void validate() const;
};

enum class BoundsStatus { Solved, Infeasible, NumericFailure };

std::string to_string(BoundsStatus status);

struct CellMass {
    std::size_t index = 0;
    CubePoint point;
    double mass = 0.0;
};

/// Summary of one witness distribution.
struct WitnessSummary {
    double value = 0.0;              // estimand value attained
    double mean_pi = 0.0;            // should equal P(e=1)
    double mean_risk = 0.0;          // should equal P(d=1)
    double exposure_variance = 0.0;  // integral of (pi - P(e=1))^2
    double risk_variance = 0.0;      // integral of (r - P(d=1))^2
    double implied_e1_d0 = 0.0;      // integral of pi (1 - r1), the row left out of the program
    bool exposure_cap_active = false;
    bool risk_cap_active = false;
    std::size_t support_size = 0;
    std::size_t iterations = 0;
    std::vector<CellMass> top_cells;  // up to five largest masses
};

struct BoundsDiagnostics {
    std::optional<WitnessSummary> min_witness;
    std::optional<WitnessSummary> max_witness;
    /// On infeasibility: "exposure-cap", "risk-cap", "either-cap", "both-caps"
    /// or "frequencies" (the grid cannot reproduce the table even without caps).
    std::string infeasibility_cause;
    std::string message;
};

struct BoundsResult {
    BoundsStatus status = BoundsStatus::NumericFailure;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<DiscreteDistribution> witness_min;
    std::optional<DiscreteDistribution> witness_max;
    BoundsDiagnostics diagnostics;

    bool solved() const noexcept { return status == BoundsStatus::Solved; }
};

/// Per-cell objective coefficient for the ATE and causality-present estimands.
double objective_coefficient(EstimandKind kind, const CubePoint& p);

/// Linear program over nonnegative cell masses.
///
/// Equalities, in order: (1-pi) r0 = P(e=0,d=1); pi r1 = P(e=1,d=1);
/// (1-pi)(1-r0) = P(e=0,d=0); sum of masses = 1. The P(e=1,d=0) row is implied
/// by the other four and is left out. Inequalities, in order: exposure
/// variance (pi - P(e=1))^2 <= exposure cap; risk variance (r - P(d=1))^2 <= risk cap.
LinearProgram assemble_lp(const IdentificationProblem& problem, Sense sense);

/// Variable layout of the ratio programs: one scaled mass per cell, then the
/// scale t.
struct RatioPrograms {
    LinearProgram min;
    LinearProgram max;
};

/// Homogenized programs for the ratio estimand (Charnes-Cooper substitution
/// y = t x with the denominator normalized to one).
RatioPrograms transform_ratio(const IdentificationProblem& problem);

/// Solves the min and max programs for the problem's estimand. On
/// infeasibility the caps are relaxed one at a time to name the cause.
BoundsResult solve_bounds(const IdentificationProblem& problem, const SolverOptions& options = {});

/// Computes the witness summary for an arbitrary distribution on the problem grid.
WitnessSummary summarize_witness(const IdentificationProblem& problem, const DiscreteDistribution& witness);

/// Value of the problem's estimand under a distribution.
double estimand_value(EstimandKind kind, const DiscreteDistribution& dist);

}  // namespace twinbounds
