#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace twinbounds {

enum class Sense { Minimize, Maximize };

struct LinearRow {
    std::vector<double> coefficients;
    double rhs = 0.0;
};

/// optimize objective . x  subject to  E x = b_E,  G x <= b_G,  x >= 0.
struct LinearProgram {
    std::size_t num_variables = 0;
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<LinearRow> equalities;
    std::vector<LinearRow> inequalities;

    std::size_t num_rows() const noexcept { return equalities.size() + inequalities.size(); }

    /// Throws InvalidInput on a length mismatch or a non-finite entry.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, NumericFailure };

std::string to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::NumericFailure;
    double objective_value = 0.0;
    std::vector<double> solution;
    /// One multiplier per row, equalities first; a certificate-free dual
    /// estimate for the problem in its original sense.
    std::vector<double> duals;
    double dual_objective = 0.0;
    /// Largest absolute row violation of `solution`.
    double max_residual = 0.0;
    /// Phase-one infeasibility (sum of artificials) when status is Infeasible.
    double infeasibility = 0.0;
    std::size_t iterations = 0;
    std::string message;
};

struct SolverOptions {
    double feasibility_tol = 1e-8;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-10;
    /// Iteration cap is iteration_factor * (rows + columns).
    std::size_t iteration_factor = 50;
    /// Consecutive degenerate pivots tolerated before switching from largest
    /// reduced cost pricing to Bland's rule.
    std::size_t degenerate_switch = 50;
};

/// Two-phase revised simplex with a dense basis refactored at every pivot.
/// Intended for programs with a handful of rows and many columns. Ties in
/// pricing and in the ratio test go to the lowest column index, so results
/// are reproducible.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

/// Plain-text dump: a header line, the objective line, then one line per
/// row as `eq|le rhs : c0 c1 ...`. Meant for cross-checking with other tools.
void write_lp_text(const LinearProgram& lp, std::ostream& out);

}  // namespace twinbounds
