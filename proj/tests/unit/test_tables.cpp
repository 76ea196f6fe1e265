#include "twinbounds/error.hpp"
#include "twinbounds/tables.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace twinbounds;

namespace {

const ContingencyTable kDiabetes{110986, 1823, 6277, 647};
const ContingencyTable kSmoking{4679, 318, 7538, 1631};
const ContingencyTable kMarijuana{3649, 114, 1864, 978};

ErrorKind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("frequencies of the diabetes table") {
    const auto f = table_to_frequencies(kDiabetes);
    CHECK(f.p_e1 == doctest::Approx(6924.0 / 119733.0).epsilon(1e-12));
    CHECK(f.p_d1 == doctest::Approx(2470.0 / 119733.0).epsilon(1e-12));
    CHECK(f.p_e1 == doctest::Approx(0.0578).epsilon(1e-3));
    CHECK(f.p_d1 == doctest::Approx(0.0206).epsilon(1e-3));
}

TEST_CASE("uniform table") {
    const auto f = table_to_frequencies({1, 1, 1, 1});
    CHECK(f.p_e0_d0 == 0.25);
    CHECK(f.p_e0_d1 == 0.25);
    CHECK(f.p_e1_d0 == 0.25);
    CHECK(f.p_e1_d1 == 0.25);
    CHECK(f.p_e1 == 0.5);
    CHECK(f.p_d1 == 0.5);
}

TEST_CASE("frequencies of the marijuana table") {
    const auto f = table_to_frequencies(kMarijuana);
    CHECK(f.p_e1 == doctest::Approx(2842.0 / 6605.0));
    CHECK(f.p_d1 == doctest::Approx(1092.0 / 6605.0));
}

TEST_CASE("relative risks of the three tables") {
    CHECK(std::abs(relative_risk(table_to_frequencies(kDiabetes)) - 5.8) <= 0.05);
    CHECK(std::abs(relative_risk(table_to_frequencies(kSmoking)) - 2.8) <= 0.05);
    CHECK(std::abs(relative_risk(table_to_frequencies(kMarijuana)) - 11.0) <= 0.5);
}

TEST_CASE("round trip and scale invariance on random tables") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> cell(1, 50000);
    for (int trial = 0; trial < 500; ++trial) {
        const ContingencyTable t{cell(rng), cell(rng), cell(rng), cell(rng)};
        const auto f = table_to_frequencies(t);
        const double n = static_cast<double>(t.total());
        CHECK(std::llround(f.p_e0_d0 * n) == static_cast<long long>(t.n_e0_d0));
        CHECK(std::llround(f.p_e0_d1 * n) == static_cast<long long>(t.n_e0_d1));
        CHECK(std::llround(f.p_e1_d0 * n) == static_cast<long long>(t.n_e1_d0));
        CHECK(std::llround(f.p_e1_d1 * n) == static_cast<long long>(t.n_e1_d1));
        CHECK(f.p_e0_d0 + f.p_e0_d1 + f.p_e1_d0 + f.p_e1_d1 == doctest::Approx(1.0).epsilon(1e-14));

        const std::uint64_t k = 1 + trial % 17;
        const ContingencyTable scaled{k * t.n_e0_d0, k * t.n_e0_d1, k * t.n_e1_d0, k * t.n_e1_d1};
        CHECK(relative_risk(table_to_frequencies(scaled)) ==
              doctest::Approx(relative_risk(f)).epsilon(1e-12));
    }
}

TEST_CASE("independence gives unit relative risk") {
    // p_e1_d1 (1 - p_e1) = p_e0_d1 p_e1
    CHECK(relative_risk(table_to_frequencies({300, 100, 600, 200})) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(relative_risk(JointFrequencies::from_joint(0.42, 0.18, 0.28, 0.12)) == doctest::Approx(1.0));
}

TEST_CASE("degenerate tables are rejected") {
    CHECK(kind_of([] { table_to_frequencies({0, 0, 0, 0}); }) == ErrorKind::ZeroTotal);
    CHECK(kind_of([] { table_to_frequencies({5, 5, 0, 0}); }) == ErrorKind::MarginDegenerate);
    CHECK(kind_of([] { table_to_frequencies({0, 0, 5, 5}); }) == ErrorKind::MarginDegenerate);
    CHECK(kind_of([] { table_to_frequencies({5, 0, 5, 0}); }) == ErrorKind::MarginDegenerate);
    try {
        table_to_frequencies({5, 5, 0, 0});
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("e=1") != std::string::npos);
    }
}

TEST_CASE("table csv") {
    const auto t = parse_table_csv("e1_d1,e0_d0,e0_d1,e1_d0\n647,110986,1823,6277\n");
    CHECK(t == kDiabetes);
    CHECK(parse_table_csv("e0_d0, e0_d1, e1_d0, e1_d1\r\n1,2,3,4") == ContingencyTable{1, 2, 3, 4});
    CHECK_THROWS_AS(parse_table_csv("e0_d0,e0_d1,e1_d0\n1,2,3\n"), Error);
    CHECK_THROWS_AS(parse_table_csv("e0_d0,e0_d1,e1_d0,e1_d1\n1,2,x,4\n"), Error);
    CHECK_THROWS_AS(parse_table_csv("e0_d0,e0_d1,e1_d0,e1_d1\n1,2,-3,4\n"), Error);
}
