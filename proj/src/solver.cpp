#include "twinbounds/solver.hpp"

#include "twinbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace twinbounds {

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::NumericFailure: return "numeric-failure";
    }
    return "unknown";
}

void LinearProgram::validate() const {
    if (num_variables == 0) {
        throw Error(ErrorKind::InvalidInput, "linear program needs at least one variable");
    }
    if (objective.size() != num_variables) {
        throw Error(ErrorKind::InvalidInput, "objective length does not match variable count");
    }
    auto check_row = [&](const LinearRow& row, const char* kind) {
        if (row.coefficients.size() != num_variables) {
            throw Error(ErrorKind::InvalidInput, std::string(kind) + " row length does not match variable count");
        }
        if (!std::isfinite(row.rhs) ||
            !std::all_of(row.coefficients.begin(), row.coefficients.end(),
                         [](double v) { return std::isfinite(v); })) {
            throw Error(ErrorKind::InvalidInput, std::string(kind) + " row has a non-finite entry");
        }
    };
    for (const auto& row : equalities) check_row(row, "equality");
    for (const auto& row : inequalities) check_row(row, "inequality");
    if (!std::all_of(objective.begin(), objective.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorKind::InvalidInput, "objective has a non-finite entry");
    }
}

namespace {

// Dense LU with partial pivoting for the (small) basis matrix.
class DenseLu {
public:
    bool factor(std::vector<double> a, std::size_t n) {
        n_ = n;
        lu_ = std::move(a);
        perm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_[k * n + k]);
            for (std::size_t i = k + 1; i < n; ++i) {
                const double v = std::abs(lu_[i * n + k]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best < 1e-13) return false;
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_[k * n + j], lu_[p * n + j]);
                std::swap(perm_[k], perm_[p]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                const double f = lu_[i * n + k] / lu_[k * n + k];
                lu_[i * n + k] = f;
                for (std::size_t j = k + 1; j < n; ++j) lu_[i * n + j] -= f * lu_[k * n + j];
            }
        }
        return true;
    }

    // Solves B x = b.
    std::vector<double> solve(const std::vector<double>& b) const {
        std::vector<double> x(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu_[i * n_ + j] * x[j];
        for (std::size_t i = n_; i-- > 0;) {
            for (std::size_t j = i + 1; j < n_; ++j) x[i] -= lu_[i * n_ + j] * x[j];
            x[i] /= lu_[i * n_ + i];
        }
        return x;
    }

    // Solves B^T y = c.
    std::vector<double> solve_transposed(const std::vector<double>& c) const {
        std::vector<double> z(c);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < i; ++j) z[i] -= lu_[j * n_ + i] * z[j];
            z[i] /= lu_[i * n_ + i];
        }
        for (std::size_t i = n_; i-- > 0;)
            for (std::size_t j = i + 1; j < n_; ++j) z[i] -= lu_[j * n_ + i] * z[j];
        std::vector<double> y(n_);
        for (std::size_t i = 0; i < n_; ++i) y[perm_[i]] = z[i];
        return y;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
};

// Column layout: [structural | one slack per inequality | one artificial per row].
class RevisedSimplex {
public:
    RevisedSimplex(const LinearProgram& lp, const SolverOptions& options)
        : options_(options),
          n_(lp.num_variables),
          k_(lp.inequalities.size()),
          m_(lp.num_rows()),
          rows_(m_),
          rhs_(m_),
          row_sign_(m_, 1.0),
          cost_(n_ + k_, 0.0) {
        std::size_t r = 0;
        for (const auto& row : lp.equalities) {
            rows_[r] = row.coefficients;
            rhs_[r] = row.rhs;
            ++r;
        }
        for (const auto& row : lp.inequalities) {
            rows_[r] = row.coefficients;
            rhs_[r] = row.rhs;
            ++r;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (rhs_[i] < 0.0) {
                row_sign_[i] = -1.0;
                rhs_[i] = -rhs_[i];
                for (double& v : rows_[i]) v = -v;
            }
        }
        const double flip = lp.sense == Sense::Maximize ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n_; ++j) cost_[j] = flip * lp.objective[j];
        max_iterations_ = options.iteration_factor * (m_ + n_);
    }

    LpSolution run() {
        LpSolution out;
        // Initial basis: slacks where the (sign-normalized) slack is +1, else artificials.
        basis_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            const bool slack_ok = i >= m_ - k_ && row_sign_[i] > 0.0;
            basis_[i] = slack_ok ? n_ + (i - (m_ - k_)) : artificial(i);
        }

        phase_ = 1;
        if (!iterate(out)) return finish_failure(out);
        double infeasibility = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (is_artificial(basis_[i])) infeasibility += std::max(0.0, xb_[i]);
        if (infeasibility > options_.feasibility_tol) {
            out.status = LpStatus::Infeasible;
            out.infeasibility = infeasibility;
            out.iterations = iterations_;
            std::ostringstream msg;
            msg << "phase one ended with infeasibility " << infeasibility;
            out.message = msg.str();
            return out;
        }
        drive_out_artificials();

        phase_ = 2;
        if (!iterate(out)) return finish_failure(out);
        return finish_optimal(out);
    }

private:
    std::size_t total_columns() const { return n_ + k_ + m_; }
    std::size_t artificial(std::size_t row) const { return n_ + k_ + row; }
    bool is_artificial(std::size_t j) const { return j >= n_ + k_; }

    double entry(std::size_t j, std::size_t r) const {
        if (j < n_) return rows_[r][j];
        if (j < n_ + k_) {
            const std::size_t row = (m_ - k_) + (j - n_);
            return row == r ? row_sign_[r] : 0.0;
        }
        return (j - n_ - k_) == r ? 1.0 : 0.0;
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> a(m_);
        for (std::size_t r = 0; r < m_; ++r) a[r] = entry(j, r);
        return a;
    }

    double cost(std::size_t j) const {
        if (phase_ == 1) return is_artificial(j) ? 1.0 : 0.0;
        return j < n_ + k_ ? cost_[j] : 0.0;
    }

    bool refactor() {
        std::vector<double> b(m_ * m_);
        for (std::size_t c = 0; c < m_; ++c)
            for (std::size_t r = 0; r < m_; ++r) b[r * m_ + c] = entry(basis_[c], r);
        if (!lu_.factor(std::move(b), m_)) return false;
        xb_ = lu_.solve(rhs_);
        for (double& v : xb_)
            if (v < 0.0 && v > -options_.feasibility_tol) v = 0.0;
        std::vector<double> cb(m_);
        for (std::size_t i = 0; i < m_; ++i) cb[i] = cost(basis_[i]);
        y_ = lu_.solve_transposed(cb);
        return true;
    }

    // Reduced costs of every column; basic and barred columns get +inf.
    void price(std::vector<double>& d) const {
        d.assign(total_columns(), std::numeric_limits<double>::infinity());
        for (std::size_t j = 0; j < n_; ++j) d[j] = cost(j);
        for (std::size_t r = 0; r < m_; ++r) {
            const double yr = y_[r];
            if (yr == 0.0) continue;
            const double* row = rows_[r].data();
            for (std::size_t j = 0; j < n_; ++j) d[j] -= yr * row[j];
        }
        for (std::size_t s = 0; s < k_; ++s) {
            const std::size_t r = (m_ - k_) + s;
            d[n_ + s] = cost(n_ + s) - y_[r] * row_sign_[r];
        }
        if (phase_ == 1) {
            for (std::size_t r = 0; r < m_; ++r) d[artificial(r)] = 1.0 - y_[r];
        }
        for (std::size_t i = 0; i < m_; ++i) d[basis_[i]] = std::numeric_limits<double>::infinity();
    }

    // Returns false on iteration cap, singular basis or unboundedness.
    bool iterate(LpSolution& out) {
        std::vector<double> d;
        std::size_t degenerate_run = 0;
        while (true) {
            if (!refactor()) {
                out.message = "basis matrix became singular";
                return false;
            }
            price(d);
            const bool bland = degenerate_run >= options_.degenerate_switch;
            std::size_t entering = total_columns();
            double best = -options_.optimality_tol;
            for (std::size_t j = 0; j < total_columns(); ++j) {
                if (d[j] < best) {
                    entering = j;
                    if (bland) break;
                    best = d[j];
                }
            }
            if (entering == total_columns()) return true;

            if (iterations_ >= max_iterations_) {
                out.message = "iteration limit reached";
                return false;
            }
            ++iterations_;

            const std::vector<double> w = lu_.solve(column(entering));
            std::size_t leave = m_;
            double step = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                double ratio;
                if (phase_ == 2 && is_artificial(basis_[i]) && std::abs(w[i]) > options_.pivot_tol) {
                    ratio = 0.0;
                } else if (w[i] > options_.pivot_tol) {
                    ratio = std::max(0.0, xb_[i]) / w[i];
                } else {
                    continue;
                }
                const bool tie = leave < m_ && std::abs(ratio - step) <= 1e-14 * std::max(1.0, step);
                if ((!tie && ratio < step) || (tie && basis_[i] < basis_[leave])) {
                    step = ratio;
                    leave = i;
                }
            }
            if (leave == m_) {
                out.message = "objective unbounded along a ray";
                return false;
            }
            degenerate_run = step <= options_.feasibility_tol * 1e-3 ? degenerate_run + 1 : 0;
            basis_[leave] = entering;
        }
    }

    void drive_out_artificials() {
        for (std::size_t p = 0; p < m_; ++p) {
            if (!is_artificial(basis_[p])) continue;
            if (!refactor()) return;
            std::vector<double> unit(m_, 0.0);
            unit[p] = 1.0;
            const std::vector<double> z = lu_.solve_transposed(unit);
            std::size_t best_j = total_columns();
            double best_alpha = options_.pivot_tol;
            for (std::size_t j = 0; j < n_ + k_; ++j) {
                if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
                double alpha = 0.0;
                for (std::size_t r = 0; r < m_; ++r) alpha += z[r] * entry(j, r);
                if (std::abs(alpha) > best_alpha) {
                    best_alpha = std::abs(alpha);
                    best_j = j;
                }
            }
            // No candidate means the row is redundant; the artificial stays at zero.
            if (best_j < total_columns()) basis_[p] = best_j;
        }
    }

    LpSolution& finish_failure(LpSolution& out) {
        out.status = LpStatus::NumericFailure;
        out.iterations = iterations_;
        return out;
    }

    LpSolution& finish_optimal(LpSolution& out) {
        out.solution.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) out.solution[basis_[i]] = std::max(0.0, xb_[i]);
        }
        out.iterations = iterations_;
        out.status = LpStatus::Optimal;
        return out;
    }

    const SolverOptions& options_;
    std::size_t n_;
    std::size_t k_;
    std::size_t m_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> rhs_;
    std::vector<double> row_sign_;
    std::vector<double> cost_;
    std::vector<std::size_t> basis_;
    std::vector<double> xb_;
    std::vector<double> y_;
    DenseLu lu_;
    int phase_ = 1;
    std::size_t iterations_ = 0;
    std::size_t max_iterations_ = 0;

public:
    // Multipliers of the normalized minimization problem, mapped back to the
    // original row signs and sense.
    std::vector<double> original_duals(Sense sense) const {
        std::vector<double> out(m_);
        const double flip = sense == Sense::Maximize ? -1.0 : 1.0;
        for (std::size_t r = 0; r < m_; ++r) out[r] = flip * row_sign_[r] * y_[r];
        return out;
    }
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
    lp.validate();
    RevisedSimplex simplex(lp, options);
    LpSolution out = simplex.run();
    if (out.status != LpStatus::Optimal) return out;

    double value = 0.0;
    for (std::size_t j = 0; j < lp.num_variables; ++j) value += lp.objective[j] * out.solution[j];
    out.objective_value = value;
    out.duals = simplex.original_duals(lp.sense);

    double residual = 0.0;
    double dual_value = 0.0;
    std::size_t r = 0;
    auto row_activity = [&](const LinearRow& row) {
        double acc = 0.0;
        for (std::size_t j = 0; j < lp.num_variables; ++j) acc += row.coefficients[j] * out.solution[j];
        return acc;
    };
    for (const auto& row : lp.equalities) {
        residual = std::max(residual, std::abs(row_activity(row) - row.rhs));
        dual_value += out.duals[r++] * row.rhs;
    }
    for (const auto& row : lp.inequalities) {
        residual = std::max(residual, std::max(0.0, row_activity(row) - row.rhs));
        dual_value += out.duals[r++] * row.rhs;
    }
    out.max_residual = residual;
    out.dual_objective = dual_value;
    if (residual > options.feasibility_tol) {
        out.status = LpStatus::NumericFailure;
        std::ostringstream msg;
        msg << "final primal residual " << residual << " exceeds tolerance";
        out.message = msg.str();
    }
    return out;
}

void write_lp_text(const LinearProgram& lp, std::ostream& out) {
    const auto old_precision = out.precision(17);
    out << (lp.sense == Sense::Minimize ? "min" : "max") << ' ' << lp.num_variables << ' '
        << lp.equalities.size() << ' ' << lp.inequalities.size() << '\n';
    out << "obj :";
    for (double c : lp.objective) out << ' ' << c;
    out << '\n';
    auto dump = [&](const char* tag, const LinearRow& row) {
        out << tag << ' ' << row.rhs << " :";
        for (double c : row.coefficients) out << ' ' << c;
        out << '\n';
    };
    for (const auto& row : lp.equalities) dump("eq", row);
    for (const auto& row : lp.inequalities) dump("le", row);
    out.precision(old_precision);
}

}  // namespace twinbounds
