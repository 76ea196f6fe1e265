#include "twinbounds/identify.hpp"

#include "twinbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace twinbounds {

std::string to_string(EstimandKind kind) {
    switch (kind) {
        case EstimandKind::Ate: return "ate";
        case EstimandKind::CausalityPresent: return "causality_present";
        case EstimandKind::RatioAte: return "ratio_ate";
    }
    return "unknown";
}

EstimandKind parse_estimand(std::string_view name) {
    if (name == "ate") return EstimandKind::Ate;
    if (name == "causality_present") return EstimandKind::CausalityPresent;
    if (name == "ratio_ate") return EstimandKind::RatioAte;
    throw Error(ErrorKind::InvalidInput,
                "unknown estimand '" + std::string(name) + "' (expected ate, causality_present or ratio_ate)");
}

std::string to_string(BoundsStatus status) {
    switch (status) {
        case BoundsStatus::Solved: return "solved";
        case BoundsStatus::Infeasible: return "infeasible";
        case BoundsStatus::NumericFailure: return "numeric-failure";
    }
    return "unknown";
}

IdentificationProblem IdentificationProblem::make(const JointFrequencies& freqs,
                                                  const ConcordanceSpec& concordance,
                                                  std::shared_ptr<const Grid> grid, EstimandKind estimand) {
    concordance.validate();
    IdentificationProblem p;
    p.freqs = freqs;
    p.exposure_cap = variance_cap(concordance.bc_e, freqs.p_e1);
    p.risk_cap = variance_cap(concordance.bc_d, freqs.p_d1);
    p.grid = std::move(grid);
    p.estimand = estimand;
    p.validate();
    return p;
}

void IdentificationProblem::validate() const {
    if (!grid) throw Error(ErrorKind::InvalidInput, "identification problem has no grid");
    if (std::abs(exposure_cap.trait_mean - freqs.p_e1) > 1e-12) {
        throw Error(ErrorKind::InvalidInput, "exposure cap trait mean differs from P(e=1)");
    }
    if (std::abs(risk_cap.trait_mean - freqs.p_d1) > 1e-12) {
        throw Error(ErrorKind::InvalidInput, "risk cap trait mean differs from P(d=1)");
    }
    if (exposure_cap.cap < 0.0 || risk_cap.cap < 0.0) {
        throw Error(ErrorKind::InvalidInput, "variance caps must be nonnegative");
    }
}

double objective_coefficient(EstimandKind kind, const CubePoint& p) {
    switch (kind) {
        case EstimandKind::Ate: return p.r1 - p.r0;
        case EstimandKind::CausalityPresent: return std::abs(p.r1 - p.r0);
        case EstimandKind::RatioAte: break;
    }
    throw Error(ErrorKind::InvalidInput, "ratio estimand has no per-cell objective; use transform_ratio");
}

namespace {

struct ConstraintRows {
    std::vector<LinearRow> equalities;
    std::vector<LinearRow> inequalities;
};

ConstraintRows constraint_rows(const IdentificationProblem& problem) {
    const Grid& grid = *problem.grid;
    const std::size_t n = grid.size();
    const JointFrequencies& f = problem.freqs;
    ConstraintRows rows;
    rows.equalities.assign(4, LinearRow{std::vector<double>(n), 0.0});
    rows.inequalities.assign(2, LinearRow{std::vector<double>(n), 0.0});
    rows.equalities[0].rhs = f.p_e0_d1;
    rows.equalities[1].rhs = f.p_e1_d1;
    rows.equalities[2].rhs = f.p_e0_d0;
    rows.equalities[3].rhs = 1.0;
    rows.inequalities[0].rhs = problem.exposure_cap.cap;
    rows.inequalities[1].rhs = problem.risk_cap.cap;
    for (std::size_t k = 0; k < n; ++k) {
        const CubePoint& c = grid[k];
        rows.equalities[0].coefficients[k] = (1.0 - c.pi) * c.r0;
        rows.equalities[1].coefficients[k] = c.pi * c.r1;
        rows.equalities[2].coefficients[k] = (1.0 - c.pi) * (1.0 - c.r0);
        rows.equalities[3].coefficients[k] = 1.0;
        const double dpi = c.pi - f.p_e1;
        const double drisk = c.expected_risk() - f.p_d1;
        rows.inequalities[0].coefficients[k] = dpi * dpi;
        rows.inequalities[1].coefficients[k] = drisk * drisk;
    }
    return rows;
}

LinearProgram feasibility_program(const IdentificationProblem& problem, bool keep_exposure, bool keep_risk) {
    ConstraintRows rows = constraint_rows(problem);
    LinearProgram lp;
    lp.num_variables = problem.grid->size();
    lp.sense = Sense::Minimize;
    lp.objective.assign(lp.num_variables, 0.0);
    lp.equalities = std::move(rows.equalities);
    if (keep_exposure) lp.inequalities.push_back(std::move(rows.inequalities[0]));
    if (keep_risk) lp.inequalities.push_back(std::move(rows.inequalities[1]));
    return lp;
}

bool is_feasible(const IdentificationProblem& problem, bool keep_exposure, bool keep_risk,
                 const SolverOptions& options) {
    return solve(feasibility_program(problem, keep_exposure, keep_risk), options).status == LpStatus::Optimal;
}

void diagnose_infeasibility(const IdentificationProblem& problem, const SolverOptions& options,
                            BoundsDiagnostics& diag) {
    const bool without_exposure = is_feasible(problem, false, true, options);
    const bool without_risk = is_feasible(problem, true, false, options);
    std::ostringstream msg;
    if (without_exposure && without_risk) {
        diag.infeasibility_cause = "either-cap";
        msg << "dropping either variance cap restores feasibility";
    } else if (without_exposure) {
        diag.infeasibility_cause = "exposure-cap";
        msg << "exposure variance cap " << problem.exposure_cap.cap << " is too small";
    } else if (without_risk) {
        diag.infeasibility_cause = "risk-cap";
        msg << "risk variance cap " << problem.risk_cap.cap << " is too small";
    } else if (is_feasible(problem, false, false, options)) {
        diag.infeasibility_cause = "both-caps";
        msg << "the exposure and risk variance caps are jointly too small";
    } else {
        diag.infeasibility_cause = "frequencies";
        msg << "no distribution on this grid reproduces the observed frequencies";
    }
    if (diag.infeasibility_cause != "frequencies") {
        msg << " for a " << problem.grid->n_pi() << "x" << problem.grid->n_r0() << "x"
            << problem.grid->n_r1() << " grid; refine the grid or check the concordances";
    } else {
        msg << "; refine the grid";
    }
    diag.message = msg.str();
}

DiscreteDistribution to_distribution(const IdentificationProblem& problem, std::vector<double> masses) {
    const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    if (total > 0.0 && std::abs(total - 1.0) <= 1e-8) {
        for (double& m : masses) m /= total;
    }
    return DiscreteDistribution(problem.grid, std::move(masses));
}

BoundsResult failure(BoundsStatus status, const LpSolution& sol, const char* which) {
    BoundsResult result;
    result.status = status;
    result.diagnostics.message = std::string(which) + " program: " + sol.message;
    return result;
}

BoundsResult solve_linear_estimand(const IdentificationProblem& problem, const SolverOptions& options) {
    const LpSolution lo = solve(assemble_lp(problem, Sense::Minimize), options);
    if (lo.status == LpStatus::Infeasible) {
        BoundsResult result;
        result.status = BoundsStatus::Infeasible;
        diagnose_infeasibility(problem, options, result.diagnostics);
        return result;
    }
    if (lo.status != LpStatus::Optimal) return failure(BoundsStatus::NumericFailure, lo, "min");
    const LpSolution hi = solve(assemble_lp(problem, Sense::Maximize), options);
    if (hi.status != LpStatus::Optimal) return failure(BoundsStatus::NumericFailure, hi, "max");

    BoundsResult result;
    result.status = BoundsStatus::Solved;
    result.lower = lo.objective_value;
    result.upper = hi.objective_value;
    result.witness_min = to_distribution(problem, lo.solution);
    result.witness_max = to_distribution(problem, hi.solution);
    result.diagnostics.min_witness = summarize_witness(problem, *result.witness_min);
    result.diagnostics.max_witness = summarize_witness(problem, *result.witness_max);
    result.diagnostics.min_witness->iterations = lo.iterations;
    result.diagnostics.max_witness->iterations = hi.iterations;
    return result;
}

BoundsResult solve_ratio_estimand(const IdentificationProblem& problem, const SolverOptions& options) {
    const RatioPrograms programs = transform_ratio(problem);
    const std::size_t n = problem.grid->size();
    const LpSolution lo = solve(programs.min, options);
    if (lo.status == LpStatus::Infeasible) {
        BoundsResult result;
        result.status = BoundsStatus::Infeasible;
        diagnose_infeasibility(problem, options, result.diagnostics);
        return result;
    }
    if (lo.status != LpStatus::Optimal) return failure(BoundsStatus::NumericFailure, lo, "ratio min");
    const LpSolution hi = solve(programs.max, options);
    if (hi.status != LpStatus::Optimal) return failure(BoundsStatus::NumericFailure, hi, "ratio max");

    auto recover = [&](const LpSolution& sol) -> std::optional<DiscreteDistribution> {
        const double t = sol.solution[n];
        if (!(t > 1e-12)) return std::nullopt;
        std::vector<double> x(sol.solution.begin(), sol.solution.begin() + static_cast<std::ptrdiff_t>(n));
        for (double& v : x) v /= t;
        return to_distribution(problem, std::move(x));
    };
    auto wmin = recover(lo);
    auto wmax = recover(hi);
    if (!wmin || !wmax) {
        BoundsResult result;
        result.status = BoundsStatus::NumericFailure;
        result.diagnostics.message = "ratio program returned a zero scale";
        return result;
    }
    BoundsResult result;
    result.status = BoundsStatus::Solved;
    result.lower = lo.objective_value;
    result.upper = hi.objective_value;
    result.witness_min = std::move(wmin);
    result.witness_max = std::move(wmax);
    result.diagnostics.min_witness = summarize_witness(problem, *result.witness_min);
    result.diagnostics.max_witness = summarize_witness(problem, *result.witness_max);
    result.diagnostics.min_witness->iterations = lo.iterations;
    result.diagnostics.max_witness->iterations = hi.iterations;
    return result;
}

}  // namespace

LinearProgram assemble_lp(const IdentificationProblem& problem, Sense sense) {
    problem.validate();
    const Grid& grid = *problem.grid;
    ConstraintRows rows = constraint_rows(problem);
    LinearProgram lp;
    lp.num_variables = grid.size();
    lp.sense = sense;
    lp.objective.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        lp.objective[k] = objective_coefficient(problem.estimand, grid[k]);
    }
    lp.equalities = std::move(rows.equalities);
    lp.inequalities = std::move(rows.inequalities);
    return lp;
}

RatioPrograms transform_ratio(const IdentificationProblem& problem) {
    problem.validate();
    if (problem.estimand != EstimandKind::RatioAte) {
        throw Error(ErrorKind::InvalidInput, "transform_ratio requires the ratio_ate estimand");
    }
    const Grid& grid = *problem.grid;
    const std::size_t n = grid.size();
    ConstraintRows rows = constraint_rows(problem);

    LinearProgram lp;
    lp.num_variables = n + 1;
    lp.objective.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) lp.objective[k] = grid[k].r1;
    // A y - b t = 0 and G y - h t <= 0.
    for (auto& row : rows.equalities) {
        row.coefficients.push_back(-row.rhs);
        row.rhs = 0.0;
        lp.equalities.push_back(std::move(row));
    }
    LinearRow denominator{std::vector<double>(n + 1, 0.0), 1.0};
    for (std::size_t k = 0; k < n; ++k) denominator.coefficients[k] = grid[k].r0;
    lp.equalities.push_back(std::move(denominator));
    for (auto& row : rows.inequalities) {
        row.coefficients.push_back(-row.rhs);
        row.rhs = 0.0;
        lp.inequalities.push_back(std::move(row));
    }

    RatioPrograms out{lp, lp};
    out.min.sense = Sense::Minimize;
    out.max.sense = Sense::Maximize;
    return out;
}

double estimand_value(EstimandKind kind, const DiscreteDistribution& dist) {
    switch (kind) {
        case EstimandKind::Ate: return dist.integrate([](const CubePoint& p) { return p.r1 - p.r0; });
        case EstimandKind::CausalityPresent:
            return dist.integrate([](const CubePoint& p) { return std::abs(p.r1 - p.r0); });
        case EstimandKind::RatioAte:
            return dist.integrate([](const CubePoint& p) { return p.r1; }) /
                   dist.integrate([](const CubePoint& p) { return p.r0; });
    }
    return 0.0;
}

WitnessSummary summarize_witness(const IdentificationProblem& problem, const DiscreteDistribution& witness) {
    const double pe = problem.freqs.p_e1;
    const double pd = problem.freqs.p_d1;
    WitnessSummary s;
    s.value = estimand_value(problem.estimand, witness);
    s.mean_pi = witness.integrate([](const CubePoint& p) { return p.pi; });
    s.mean_risk = witness.integrate([](const CubePoint& p) { return p.expected_risk(); });
    s.exposure_variance = witness.integrate([pe](const CubePoint& p) { return (p.pi - pe) * (p.pi - pe); });
    s.risk_variance = witness.integrate([pd](const CubePoint& p) {
        const double d = p.expected_risk() - pd;
        return d * d;
    });
    s.implied_e1_d0 = witness.integrate([](const CubePoint& p) { return p.pi * (1.0 - p.r1); });
    s.exposure_cap_active = s.exposure_variance >= problem.exposure_cap.cap - 1e-9;
    s.risk_cap_active = s.risk_variance >= problem.risk_cap.cap - 1e-9;

    const auto masses = witness.masses();
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < masses.size(); ++k) {
        if (masses[k] > 0.0) order.push_back(k);
    }
    s.support_size = order.size();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return masses[a] > masses[b]; });
    for (std::size_t i = 0; i < std::min<std::size_t>(5, order.size()); ++i) {
        s.top_cells.push_back({order[i], witness.grid()[order[i]], masses[order[i]]});
    }
    return s;
}

BoundsResult solve_bounds(const IdentificationProblem& problem, const SolverOptions& options) {
    problem.validate();
    if (problem.estimand == EstimandKind::RatioAte) return solve_ratio_estimand(problem, options);
    return solve_linear_estimand(problem, options);
}

}  // namespace twinbounds
