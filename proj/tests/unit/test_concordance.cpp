#include "twinbounds/concordance.hpp"
#include "twinbounds/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace twinbounds;

TEST_CASE("pairwise to probandwise") {
    CHECK(std::abs(pc_to_bc(0.45) - 0.62) <= 0.005);
    CHECK(pc_to_bc(0.0) == 0.0);
    CHECK(pc_to_bc(1.0) == 1.0);
    CHECK(std::abs(bc_to_pc(0.62) - 0.449) <= 0.005);
    CHECK(bc_to_pc(0.0) == 0.0);
    CHECK(bc_to_pc(1.0) == 1.0);
    CHECK_THROWS_AS(pc_to_bc(-0.1), Error);
    CHECK_THROWS_AS(bc_to_pc(1.5), Error);
}

TEST_CASE("conversion round trip over a sweep") {
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        CHECK(std::abs(bc_to_pc(pc_to_bc(x)) - x) <= 1e-12);
        CHECK(std::abs(pc_to_bc(bc_to_pc(x)) - x) <= 1e-12);
    }
}

TEST_CASE("twin statistics examples") {
    const auto equal = twin_stats(TwinCounts::from_cdu(25, 25, 50));
    CHECK(equal.bc == doctest::Approx(2.0 / 3.0));
    CHECK(equal.pc == doctest::Approx(0.5));

    const auto all = twin_stats(TwinCounts::from_cdu(40, 0, 0));
    CHECK(all.bc == 1.0);
    CHECK(all.pc == 1.0);
    CHECK(all.v == 1.0);
    CHECK(all.trait_mean == 1.0);

    const auto s = twin_stats(TwinCounts::from_cdu(30, 40, 30));
    CHECK(s.bc == doctest::Approx(0.6));
    CHECK(s.pc == doctest::Approx(0.4286).epsilon(1e-3));
    CHECK(s.v == doctest::Approx(0.6));
    CHECK(s.trait_mean == doctest::Approx(0.5));
}

TEST_CASE("twin statistics errors") {
    CHECK_THROWS_AS(twin_stats(TwinCounts::from_cdu(0, 0, 10)), Error);
    CHECK_THROWS_AS(twin_stats(TwinCounts{10, 3, 3, 3}), Error);
    try {
        twin_stats(TwinCounts::from_cdu(0, 0, 10));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TraitAbsent);
    }
}

TEST_CASE("homogeneity identity on random counts") {
    // v = 1 - 2 trait_mean (1 - bc) reduces to U + C = n - D in integers.
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> cell(0, 100000);
    int checked = 0;
    while (checked < 1000) {
        const auto tc = TwinCounts::from_cdu(cell(rng), cell(rng), cell(rng));
        if (2 * tc.both + tc.one == 0) continue;
        ++checked;
        const std::uint64_t affected = 2 * tc.both + tc.one;
        // 2 * (2C+D)/(2n) * (D/(2C+D)) = D/n, exact in rationals.
        const std::uint64_t rhs_num = tc.n_pairs * affected - tc.one * affected;  // (1 - D/n) * n * (2C+D)
        CHECK((tc.neither + tc.both) * affected == rhs_num);
        const auto s = twin_stats(tc);
        CHECK(std::abs(s.v - (1.0 - 2.0 * s.trait_mean * (1.0 - s.bc))) <= 1e-12);
    }
}

TEST_CASE("variance cap") {
    CHECK(variance_cap(0.3, 0.3).cap == 0.0);
    CHECK(variance_cap(0.62, 6924.0 / 119733.0).cap == doctest::Approx(0.0325).epsilon(5e-3));
    CHECK(variance_cap(0.67, 9169.0 / 14166.0).cap == doctest::Approx(0.0147).epsilon(1e-2));
    CHECK(variance_cap(1.0, 0.25).cap == doctest::Approx(0.1875));
}

TEST_CASE("variance cap rejects concordance below prevalence") {
    try {
        variance_cap(0.1, 0.2);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InconsistentConcordance);
    }
    CHECK_THROWS_AS(variance_cap(0.5, 0.0), Error);
    CHECK_THROWS_AS(variance_cap(0.5, 1.0), Error);
    CHECK_THROWS_AS(variance_cap(0.0, 0.5), Error);
}

TEST_CASE("concordance spec validation") {
    CHECK_NOTHROW(ConcordanceSpec{0.5, 1.0}.validate());
    CHECK_THROWS_AS((ConcordanceSpec{0.0, 0.5}.validate()), Error);
    CHECK_THROWS_AS((ConcordanceSpec{0.5, 1.2}.validate()), Error);
}
