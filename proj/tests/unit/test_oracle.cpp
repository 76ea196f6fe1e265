#include "twinbounds/concordance.hpp"
#include "twinbounds/error.hpp"
#include "twinbounds/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace twinbounds;
using namespace twinbounds::oracle;

namespace {

Mixture two_point() {
    return Mixture{{0.5, 0.5}, {CubePoint{0.3, 0.1, 0.9}, CubePoint{0.7, 0.5, 0.5}}};
}

}  // namespace

TEST_CASE("point-mass population") {
    const auto pop = sample_population({PointMass{{0.5, 0.2, 0.8}}, 1'000'000, 42});
    CHECK(pop.table.total() == 1'000'000);
    const auto f = table_to_frequencies(pop.table);
    CHECK(std::abs(f.p_e1 - 0.5) <= 0.002);
    CHECK(pop.true_ate == 0.8 - 0.2);
    CHECK(pop.true_ate == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(std::abs(f.p_d1 - 0.5) <= 0.002);
    CHECK(pop.variance_pi == 0.0);
}

TEST_CASE("null effect point mass") {
    for (double r : {0.1, 0.35, 0.9}) {
        const auto pop = sample_population({PointMass{{0.4, r, r}}, 10'000, 3});
        CHECK(pop.true_ate == 0.0);
    }
}

TEST_CASE("two-point mixture population") {
    const auto pop = sample_population({two_point(), 1'000'000, 2024});
    CHECK(pop.true_ate == 0.4);
    CHECK(expected_ate(two_point()) == doctest::Approx(0.4).epsilon(1e-15));
    const auto f = table_to_frequencies(pop.table);
    CHECK(std::abs(f.p_d1 - 0.42) <= 0.002);
    const auto e = expected_frequencies(two_point());
    CHECK(e.p_d1 == doctest::Approx(0.42).epsilon(1e-14));
    CHECK(e.p_e1 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pop.variance_pi == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("product uniform population") {
    const ProductUniform s{{0.2, 0.6}, {0.1, 0.3}, {0.5, 0.9}};
    const auto pop = sample_population({s, 500'000, 9});
    CHECK(std::abs(pop.true_ate - 0.5) <= 0.002);
    CHECK(std::abs(table_to_frequencies(pop.table).p_e1 - 0.4) <= 0.003);
    CHECK(expected_ate(s) == doctest::Approx(0.5));
}

TEST_CASE("population sampling is deterministic") {
    const PopulationSpec spec{two_point(), 200'000, 77};
    CHECK(sample_population(spec).table == sample_population(spec).table);
    PopulationSpec other = spec;
    other.seed = 78;
    CHECK_FALSE(sample_population(spec).table == sample_population(other).table);
}

TEST_CASE("invalid samplers") {
    CHECK_THROWS_AS(validate_sampler(PointMass{{0.0, 0.5, 0.5}}), Error);
    CHECK_THROWS_AS(validate_sampler(Mixture{{0.5, 0.4}, {CubePoint{}, CubePoint{}}}), Error);
    CHECK_THROWS_AS(validate_sampler(Mixture{{1.0}, {}}), Error);
    CHECK_THROWS_AS(validate_sampler(ProductUniform{{0.6, 0.2}, {0.1, 0.3}, {0.1, 0.3}}), Error);
}

TEST_CASE("fully shared environment gives full concordance") {
    TwinPairSpec spec{two_point(), Trait::Exposure, 1.0, 0.0, 50'000, 5};
    const auto tc = simulate_twins(spec);
    CHECK(tc.one == 0);
    CHECK(twin_stats(tc).bc == 1.0);
}

TEST_CASE("independent draws at one half") {
    TwinPairSpec spec{PointMass{{0.5, 0.5, 0.5}}, Trait::Exposure, 0.0, 0.0, 1'000'000, 8};
    const auto s = twin_stats(simulate_twins(spec));
    CHECK(std::abs(s.bc - 0.5) <= 0.005);
    CHECK(std::abs(s.v - 0.5) <= 0.005);
    CHECK(expected_bc(spec) == doctest::Approx(0.5));
}

TEST_CASE("simulated counts satisfy the homogeneity identity") {
    for (double shared : {0.0, 0.3, 0.8}) {
        for (Trait trait : {Trait::Exposure, Trait::Outcome}) {
            TwinPairSpec spec{two_point(), trait, shared, 0.1, 20'000, 13};
            const auto tc = simulate_twins(spec);
            CHECK(tc.both + tc.one + tc.neither == tc.n_pairs);
            CHECK((tc.neither + tc.both) + tc.one == tc.n_pairs);
            const auto s = twin_stats(tc);
            CHECK(std::abs(s.v - (1.0 - 2.0 * s.trait_mean * (1.0 - s.bc))) <= 1e-12);
        }
    }
}

TEST_CASE("simulated concordance tracks its closed form") {
    for (double shared : {0.0, 0.2, 0.6}) {
        for (double anti : {0.0, 0.3}) {
            TwinPairSpec spec{two_point(), Trait::Outcome, shared, anti, 400'000, 21};
            CHECK(std::abs(twin_stats(simulate_twins(spec)).bc - expected_bc(spec)) <= 0.01);
        }
    }
}

TEST_CASE("antithetic draws break the twin assumption") {
    TwinPairSpec good{two_point(), Trait::Exposure, 0.2, 0.0, 200'000, 4};
    CHECK(simulate_twin_study(good).assumption_holds());
    TwinPairSpec bad{two_point(), Trait::Exposure, 0.0, 0.5, 200'000, 4};
    const auto sim = simulate_twin_study(bad);
    CHECK_FALSE(sim.assumption_holds());
    // Concordance falls below what the trait variance requires.
    const auto s = twin_stats(sim.counts);
    CHECK(s.trait_mean * (s.bc - s.trait_mean) < 0.04);
}

TEST_CASE("twin spec validation") {
    CHECK_THROWS_AS((TwinPairSpec{two_point(), Trait::Exposure, 0.7, 0.5, 10, 0}.validate()), Error);
    CHECK_THROWS_AS((TwinPairSpec{two_point(), Trait::Exposure, 0.1, 0.1, 0, 0}.validate()), Error);
}

TEST_CASE("point mass with exact frequencies is always covered") {
    CoverageSpec spec;
    spec.population = {PointMass{{0.5, 0.3, 0.7}}, 1'000'000, 1};
    spec.exposure_twins = {0.0, 0.0, 100'000};
    spec.outcome_twins = {0.0, 0.0, 100'000};
    spec.grid = 5;
    spec.replications = 5;
    spec.slack = 0.0;
    spec.exact_frequencies = true;
    const auto r = coverage_check(spec);
    CHECK(r.solved == 5);
    REQUIRE(r.coverage.has_value());
    CHECK(*r.coverage == 1.0);
    CHECK_FALSE(r.assumption_violated);
}

TEST_CASE("mixture coverage on a few replications") {
    CoverageSpec spec;
    spec.population = {two_point(), 1'000'000, 2024};
    spec.exposure_twins = {0.2, 0.0, 100'000};
    spec.outcome_twins = {0.2, 0.0, 100'000};
    spec.grid = 15;
    spec.replications = 8;
    const auto r = coverage_check(spec);
    CHECK(r.solved + r.infeasible + r.failed == 8);
    REQUIRE(r.coverage.has_value());
    CHECK(*r.coverage >= 0.95);
    CHECK_FALSE(r.assumption_violated);
    for (const auto& rep : r.replications) CHECK(rep.true_ate == 0.4);

    const auto again = coverage_check(spec);
    for (std::size_t i = 0; i < r.replications.size(); ++i) {
        CHECK(again.replications[i].table == r.replications[i].table);
        CHECK(again.replications[i].lower == r.replications[i].lower);
    }
    CHECK_FALSE(r.replications[0].table == r.replications[1].table);
}

TEST_CASE("negative control is flagged") {
    CoverageSpec spec;
    spec.population = {two_point(), 1'000'000, 2024};
    spec.exposure_twins = {0.0, 0.3, 100'000};
    spec.outcome_twins = {0.2, 0.0, 100'000};
    spec.grid = 15;
    spec.replications = 3;
    const auto r = coverage_check(spec);
    CHECK(r.assumption_violated);
    for (const auto& rep : r.replications) {
        CHECK_FALSE(rep.exposure_assumption_holds);
        CHECK(rep.outcome_assumption_holds);
        CHECK(rep.exposure_variance > rep.exposure_cap);
    }
}
