#include "twinbounds/error.hpp"
#include "twinbounds/solver.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace twinbounds;

namespace {

LinearProgram simplex_two(Sense sense, std::vector<double> c) {
    LinearProgram lp;
    lp.num_variables = 2;
    lp.sense = sense;
    lp.objective = std::move(c);
    lp.equalities.push_back({{1.0, 1.0}, 1.0});
    return lp;
}

// Random program whose feasible set contains a known strictly positive point.
LinearProgram random_feasible(std::mt19937_64& rng, std::size_t n, std::size_t neq, std::size_t nle, Sense sense) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x0(n);
    for (double& v : x0) v = 0.1 + u(rng);
    LinearProgram lp;
    lp.num_variables = n;
    lp.sense = sense;
    for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(u(rng) * 2.0 - 1.0);
    lp.equalities.push_back({std::vector<double>(n, 1.0), 0.0});
    for (std::size_t j = 0; j < n; ++j) lp.equalities[0].rhs += x0[j];
    for (std::size_t r = 1; r < neq; ++r) {
        LinearRow row{std::vector<double>(n), 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            row.coefficients[j] = u(rng);
            row.rhs += row.coefficients[j] * x0[j];
        }
        lp.equalities.push_back(row);
    }
    for (std::size_t r = 0; r < nle; ++r) {
        LinearRow row{std::vector<double>(n), 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            row.coefficients[j] = u(rng) * 2.0 - 1.0;
            row.rhs += row.coefficients[j] * x0[j];
        }
        row.rhs += 0.05 * u(rng);
        lp.inequalities.push_back(row);
    }
    return lp;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& row : lp.equalities) {
        double a = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) a += row.coefficients[j] * x[j];
        worst = std::max(worst, std::abs(a - row.rhs));
    }
    for (const auto& row : lp.inequalities) {
        double a = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) a += row.coefficients[j] * x[j];
        worst = std::max(worst, a - row.rhs);
    }
    for (double v : x) worst = std::max(worst, -v);
    return worst;
}

}  // namespace

TEST_CASE("maximize one coordinate on the simplex") {
    const auto s = solve(simplex_two(Sense::Maximize, {1.0, 0.0}));
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(1.0));
    CHECK(s.solution[0] == doctest::Approx(1.0));
    CHECK(s.solution[1] == doctest::Approx(0.0));
}

TEST_CASE("slack upper bound row") {
    auto lp = simplex_two(Sense::Minimize, {1.0, -1.0});
    lp.inequalities.push_back({{1.0, 0.0}, 0.25});
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(-1.0));
    CHECK(s.solution[0] == doctest::Approx(0.0));
    CHECK(s.solution[1] == doctest::Approx(1.0));
}

TEST_CASE("binding upper bound row") {
    auto lp = simplex_two(Sense::Maximize, {1.0, -1.0});
    lp.inequalities.push_back({{1.0, 0.0}, 0.25});
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(-0.5));
    CHECK(s.solution[0] == doctest::Approx(0.25));
}

TEST_CASE("infeasible programs") {
    auto lp = simplex_two(Sense::Minimize, {1.0, 1.0});
    lp.inequalities.push_back({{1.0, 1.0}, 0.5});
    CHECK(solve(lp).status == LpStatus::Infeasible);

    auto neg = simplex_two(Sense::Minimize, {1.0, 1.0});
    neg.equalities[0].rhs = -1.0;
    CHECK(solve(neg).status == LpStatus::Infeasible);
}

TEST_CASE("negative right-hand sides are handled") {
    LinearProgram lp;
    lp.num_variables = 3;
    lp.sense = Sense::Minimize;
    lp.objective = {1.0, 2.0, 3.0};
    lp.equalities.push_back({{1.0, 1.0, 1.0}, 1.0});
    lp.inequalities.push_back({{-1.0, 0.0, 0.0}, -0.2});  // x0 >= 0.2
    lp.inequalities.push_back({{0.0, -1.0, 0.0}, -0.3});  // x1 >= 0.3
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(0.7 + 0.6));
}

TEST_CASE("malformed programs are rejected") {
    LinearProgram lp = simplex_two(Sense::Minimize, {1.0});
    CHECK_THROWS_AS(solve(lp), Error);
    LinearProgram nan = simplex_two(Sense::Minimize, {1.0, NAN});
    CHECK_THROWS_AS(solve(nan), Error);
}

TEST_CASE("matches vertex enumeration on random small programs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + trial % 6;
        const std::size_t neq = 1 + trial % 3;
        const std::size_t nle = trial % 3;
        const Sense sense = trial % 2 ? Sense::Maximize : Sense::Minimize;
        const auto lp = random_feasible(rng, n, neq, nle, sense);
        const auto oracle = testing::enumerate_vertices(lp);
        const auto s = solve(lp);
        CAPTURE(trial);
        REQUIRE(oracle.feasible);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(std::abs(s.objective_value - oracle.value) <= 1e-8);
        CHECK(max_violation(lp, s.solution) <= 1e-8);
    }
}

TEST_CASE("strong duality at the optimum") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto lp = random_feasible(rng, 12, 3, 2, trial % 2 ? Sense::Maximize : Sense::Minimize);
        const auto s = solve(lp);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(std::abs(s.dual_objective - s.objective_value) <= 1e-8);
        CHECK(s.duals.size() == lp.num_rows());
        CHECK(s.max_residual <= 1e-8);
    }
}

TEST_CASE("objective scaling scales the optimum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto lp = random_feasible(rng, 10, 2, 2, Sense::Minimize);
        const double base = solve(lp).objective_value;
        for (double& c : lp.objective) c *= 7.5;
        CHECK(solve(lp).objective_value == doctest::Approx(7.5 * base).epsilon(1e-9));
    }
}

TEST_CASE("degenerate program terminates") {
    // Many identical columns and a redundant equality.
    LinearProgram lp;
    lp.num_variables = 40;
    lp.sense = Sense::Maximize;
    for (std::size_t j = 0; j < 40; ++j) lp.objective.push_back(static_cast<double>(j % 4));
    lp.equalities.push_back({std::vector<double>(40, 1.0), 1.0});
    lp.equalities.push_back({std::vector<double>(40, 2.0), 2.0});
    LinearRow cap{std::vector<double>(40, 0.0), 0.0};
    for (std::size_t j = 0; j < 40; ++j) cap.coefficients[j] = (j % 4 == 3) ? 1.0 : 0.0;
    cap.rhs = 0.0;
    lp.inequalities.push_back(cap);
    const auto s = solve(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(2.0));
}

TEST_CASE("solves are deterministic") {
    std::mt19937_64 rng(17);
    const auto lp = random_feasible(rng, 200, 4, 2, Sense::Maximize);
    const auto a = solve(lp);
    const auto b = solve(lp);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.solution == b.solution);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("plain text dump") {
    auto lp = simplex_two(Sense::Maximize, {1.0, 0.0});
    lp.inequalities.push_back({{1.0, 0.0}, 0.25});
    std::ostringstream out;
    write_lp_text(lp, out);
    const std::string text = out.str();
    CHECK(text.rfind("max 2 1 1", 0) == 0);
    CHECK(text.find("obj :") != std::string::npos);
    CHECK(text.find("eq 1 :") != std::string::npos);
    CHECK(text.find("le 0.25 :") != std::string::npos);
}
