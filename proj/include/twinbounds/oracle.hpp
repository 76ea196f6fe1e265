#pragma once

#include "twinbounds/concordance.hpp"
#include "twinbounds/grid.hpp"
#include "twinbounds/identify.hpp"
#include "twinbounds/random.hpp"
#include "twinbounds/tables.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

// Synthetic data-generating processes for end-to-end validation: individuals
// carry latent (pi, r0, r1), exposure is Bernoulli(pi) and the outcome is
// Bernoulli(r1) or Bernoulli(r0) depending on exposure.
namespace twinbounds::oracle {

struct PointMass {
    CubePoint point;
};

struct Mixture {
    std::vector<double> weights;
    std::vector<CubePoint> points;
};

/// Independent uniforms on [lo, hi] per coordinate, 0 < lo < hi < 1.
struct UniformRange {
    double lo = 0.0;
    double hi = 1.0;
    double mean() const noexcept { return 0.5 * (lo + hi); }
    double second_moment() const noexcept { return (lo * lo + lo * hi + hi * hi) / 3.0; }
};

struct ProductUniform {
    UniformRange pi;
    UniformRange r0;
    UniformRange r1;
};

using Sampler = std::variant<PointMass, Mixture, ProductUniform>;

/// Throws InvalidInput if any support point or range leaves the open cube,
/// or mixture weights are not a probability vector.
void validate_sampler(const Sampler& sampler);

struct PopulationSpec {
    Sampler sampler;
    std::uint64_t size = 1'000'000;
    std::uint64_t seed = 0;
};

struct Population {
    ContingencyTable table;
    double true_ate = 0.0;  // mean of r1 - r0 over the individuals
    double mean_pi = 0.0;
    double variance_pi = 0.0;
    double mean_risk = 0.0;
    double variance_risk = 0.0;
};

/// Draws the population. Mixture components get exact largest-remainder
/// allocations of `size`, so the latent distribution of a finite mixture
/// population equals the mixture exactly.
Population sample_population(const PopulationSpec& spec);

/// Infinite-population cell frequencies implied by the sampler.
JointFrequencies expected_frequencies(const Sampler& sampler);

/// Integral of r1 - r0 under the sampler.
double expected_ate(const Sampler& sampler);

enum class Trait { Exposure, Outcome };

/// Monozygotic pairs share one propensity psi (pi for the exposure trait,
/// expected risk for the outcome trait), drawn from the population sampler.
/// Each pair is coupled in one of three ways: with probability `shared` both
/// twins share a single Bernoulli(psi) draw; with probability `anti` they get
/// antithetic draws (U < psi, 1 - U < psi); otherwise they draw independently.
struct TwinPairSpec {
    Sampler sampler;
    Trait trait = Trait::Exposure;
    double shared = 0.0;
    double anti = 0.0;
    std::uint64_t pairs = 100'000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TwinSimulation {
    TwinCounts counts;
    /// Mean over pairs of P(A_j) + P(B_j) given each pair's psi and coupling law.
    double expected_homogeneous = 0.0;
    /// Mean over pairs of psi^2 + (1 - psi)^2.
    double independent_baseline = 0.0;
    double psi_mean = 0.0;
    double psi_variance = 0.0;

    bool assumption_holds() const noexcept { return expected_homogeneous >= independent_baseline; }
};

TwinSimulation simulate_twin_study(const TwinPairSpec& spec);

inline TwinCounts simulate_twins(const TwinPairSpec& spec) { return simulate_twin_study(spec).counts; }

/// Probandwise concordance in the limit of infinitely many pairs.
/// ProductUniform with anti > 0 on the outcome trait is not supported.
double expected_bc(const TwinPairSpec& spec);

struct TwinCoupling {
    double shared = 0.0;
    double anti = 0.0;
    std::uint64_t pairs = 100'000;
};

struct CoverageSpec {
    PopulationSpec population;
    TwinCoupling exposure_twins;
    TwinCoupling outcome_twins;
    std::size_t grid = 15;
    std::size_t replications = 50;
    double slack = 0.02;
    /// Feed infinite-population frequencies and concordances instead of
    /// sampled ones.
    bool exact_frequencies = false;
    double coverage_threshold = 0.95;

    void validate() const;
};

struct ReplicationOutcome {
    ContingencyTable table;
    double bc_e = 0.0;
    double bc_d = 0.0;
    double true_ate = 0.0;
    std::string status;  // solved | infeasible | numeric-failure | invalid
    std::string error;
    double lower = 0.0;
    double upper = 0.0;
    bool covered = false;
    bool exposure_assumption_holds = true;
    bool outcome_assumption_holds = true;
    // Population variance of psi against the cap implied by the simulated BC.
    double exposure_variance = 0.0;
    double exposure_cap = 0.0;
    double outcome_variance = 0.0;
    double outcome_cap = 0.0;
};

struct CoverageReport {
    std::vector<ReplicationOutcome> replications;
    std::size_t solved = 0;
    std::size_t infeasible = 0;  // includes invalid concordances
    std::size_t failed = 0;
    std::size_t covered = 0;
    std::optional<double> coverage;  // covered / solved
    bool meets_threshold = false;
    bool assumption_violated = false;
};

CoverageReport coverage_check(const CoverageSpec& spec, const SolverOptions& options = {});

}  // namespace twinbounds::oracle
