#include "twinbounds/oracle.hpp"

#include "twinbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace twinbounds::oracle {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool inside_open_cube(const CubePoint& p) {
    auto open = [](double v) { return v > 0.0 && v < 1.0; };
    return open(p.pi) && open(p.r0) && open(p.r1);
}

void check_range(const UniformRange& r, const char* name) {
    if (!(r.lo > 0.0 && r.lo < r.hi && r.hi < 1.0)) {
        throw Error(ErrorKind::InvalidInput,
                    std::string("uniform range for ") + name + " must satisfy 0 < lo < hi < 1");
    }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 1));
}

// Largest-remainder split of `total` by `weights`; ties go to the lower index.
std::vector<std::uint64_t> allocate(const std::vector<double>& weights, std::uint64_t total) {
    std::vector<std::uint64_t> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::uint64_t assigned = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double exact = weights[k] * static_cast<double>(total);
        counts[k] = static_cast<std::uint64_t>(std::floor(exact));
        assigned += counts[k];
        remainders.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) {
        ++counts[remainders[i % remainders.size()].second];
    }
    return counts;
}

// Moments of the trait propensity psi: E psi, E psi^2 and E max(0, 2 psi - 1).
struct TraitMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double upper_part = 0.0;
    bool upper_part_known = true;
};

double psi_of(const CubePoint& p, Trait trait) {
    return trait == Trait::Exposure ? p.pi : p.expected_risk();
}

TraitMoments trait_moments(const Sampler& sampler, Trait trait) {
    auto from_points = [trait](const std::vector<double>& w, const std::vector<CubePoint>& pts) {
        TraitMoments m;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double psi = psi_of(pts[k], trait);
            m.m1 += w[k] * psi;
            m.m2 += w[k] * psi * psi;
            m.upper_part += w[k] * std::max(0.0, 2.0 * psi - 1.0);
        }
        return m;
    };
    return std::visit(
        Overloaded{
            [&](const PointMass& s) { return from_points({1.0}, {s.point}); },
            [&](const Mixture& s) { return from_points(s.weights, s.points); },
            [&](const ProductUniform& s) {
                TraitMoments m;
                if (trait == Trait::Exposure) {
                    m.m1 = s.pi.mean();
                    m.m2 = s.pi.second_moment();
                    if (s.pi.hi > 0.5) {
                        const double c = std::max(s.pi.lo, 0.5);
                        m.upper_part = ((s.pi.hi * s.pi.hi - s.pi.hi) - (c * c - c)) / (s.pi.hi - s.pi.lo);
                    }
                } else {
                    const double e_pi = s.pi.mean();
                    const double e_pi2 = s.pi.second_moment();
                    const double e_q2 = 1.0 - 2.0 * e_pi + e_pi2;  // E (1-pi)^2
                    const double e_pq = e_pi - e_pi2;              // E pi (1-pi)
                    m.m1 = (1.0 - e_pi) * s.r0.mean() + e_pi * s.r1.mean();
                    m.m2 = e_q2 * s.r0.second_moment() + 2.0 * e_pq * s.r0.mean() * s.r1.mean() +
                           e_pi2 * s.r1.second_moment();
                    m.upper_part_known = false;
                }
                return m;
            },
        },
        sampler);
}

CubePoint draw_uniform(const ProductUniform& s, Engine& engine) {
    std::uniform_real_distribution<double> pi(s.pi.lo, s.pi.hi);
    std::uniform_real_distribution<double> r0(s.r0.lo, s.r0.hi);
    std::uniform_real_distribution<double> r1(s.r1.lo, s.r1.hi);
    const double a = pi(engine);
    const double b = r0(engine);
    const double c = r1(engine);
    return {a, b, c};
}

// Draws one individual's latent triple.
class IndividualDraw {
public:
    explicit IndividualDraw(const Sampler& sampler) : sampler_(sampler) {
        if (const auto* mix = std::get_if<Mixture>(&sampler_)) {
            pick_ = std::discrete_distribution<std::size_t>(mix->weights.begin(), mix->weights.end());
        }
    }

    CubePoint operator()(Engine& engine) {
        return std::visit(Overloaded{
                              [](const PointMass& s) { return s.point; },
                              [&](const Mixture& s) { return s.points[pick_(engine)]; },
                              [&](const ProductUniform& s) { return draw_uniform(s, engine); },
                          },
                          sampler_);
    }

private:
    const Sampler& sampler_;
    std::discrete_distribution<std::size_t> pick_;
};

struct RunningMoments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x, double weight = 1.0) {
        if (weight <= 0.0) return;
        n += weight;
        const double delta = x - mean;
        mean += delta * weight / n;
        m2 += weight * delta * (x - mean);
    }
    double variance() const { return n > 0.0 ? m2 / n : 0.0; }
};

// Infinite-pair version of TwinSimulation::assumption_holds.
bool expected_homogeneity_holds(const TraitMoments& m, const TwinCoupling& c) {
    const double baseline = 1.0 - 2.0 * m.m1 + 2.0 * m.m2;
    if (c.anti == 0.0) return true;
    const double antithetic = 2.0 * m.upper_part - (2.0 * m.m1 - 1.0);  // E|2 psi - 1|
    const double homogeneous = c.shared + (1.0 - c.shared - c.anti) * baseline + c.anti * antithetic;
    return homogeneous >= baseline;
}

}  // namespace

void validate_sampler(const Sampler& sampler) {
    std::visit(Overloaded{
                   [](const PointMass& s) {
                       if (!inside_open_cube(s.point)) {
                           throw Error(ErrorKind::InvalidInput, "point mass must lie inside the open unit cube");
                       }
                   },
                   [](const Mixture& s) {
                       if (s.points.empty() || s.points.size() != s.weights.size()) {
                           throw Error(ErrorKind::InvalidInput, "mixture needs one weight per point");
                       }
                       double total = 0.0;
                       for (std::size_t k = 0; k < s.points.size(); ++k) {
                           if (!(s.weights[k] >= 0.0)) {
                               throw Error(ErrorKind::InvalidInput, "mixture weights must be nonnegative");
                           }
                           if (!inside_open_cube(s.points[k])) {
                               throw Error(ErrorKind::InvalidInput,
                                           "mixture points must lie inside the open unit cube");
                           }
                           total += s.weights[k];
                       }
                       if (std::abs(total - 1.0) > 1e-12) {
                           throw Error(ErrorKind::InvalidInput, "mixture weights must sum to 1");
                       }
                   },
                   [](const ProductUniform& s) {
                       check_range(s.pi, "pi");
                       check_range(s.r0, "r0");
                       check_range(s.r1, "r1");
                   },
               },
               sampler);
}

Population sample_population(const PopulationSpec& spec) {
    validate_sampler(spec.sampler);
    if (spec.size == 0) throw Error(ErrorKind::InvalidInput, "population size must be positive");
    Engine engine = stream_engine(spec.seed, 0);
    Population pop;
    RunningMoments pi_moments;
    RunningMoments risk_moments;
    double ate_sum = 0.0;

    // Groups of identical individuals: e ~ Bin(n, pi), then d | e ~ Bin(., r_e).
    auto add_group = [&](const CubePoint& p, std::uint64_t n) {
        if (n == 0) return;
        std::binomial_distribution<std::uint64_t> exposed(n, p.pi);
        const std::uint64_t n_e1 = exposed(engine);
        const std::uint64_t n_e0 = n - n_e1;
        std::binomial_distribution<std::uint64_t> sick1(n_e1, p.r1);
        std::binomial_distribution<std::uint64_t> sick0(n_e0, p.r0);
        const std::uint64_t d1_e1 = sick1(engine);
        const std::uint64_t d1_e0 = sick0(engine);
        pop.table.n_e1_d1 += d1_e1;
        pop.table.n_e1_d0 += n_e1 - d1_e1;
        pop.table.n_e0_d1 += d1_e0;
        pop.table.n_e0_d0 += n_e0 - d1_e0;
        const double w = static_cast<double>(n);
        ate_sum += w * (p.r1 - p.r0);
        pi_moments.add(p.pi, w);
        risk_moments.add(p.expected_risk(), w);
    };

    std::visit(Overloaded{
                   [&](const PointMass& s) { add_group(s.point, spec.size); },
                   [&](const Mixture& s) {
                       const auto counts = allocate(s.weights, spec.size);
                       for (std::size_t k = 0; k < counts.size(); ++k) add_group(s.points[k], counts[k]);
                   },
                   [&](const ProductUniform& s) {
                       for (std::uint64_t i = 0; i < spec.size; ++i) add_group(draw_uniform(s, engine), 1);
                   },
               },
               spec.sampler);

    pop.true_ate = ate_sum / static_cast<double>(spec.size);
    pop.mean_pi = pi_moments.mean;
    pop.variance_pi = pi_moments.variance();
    pop.mean_risk = risk_moments.mean;
    pop.variance_risk = risk_moments.variance();
    return pop;
}

JointFrequencies expected_frequencies(const Sampler& sampler) {
    validate_sampler(sampler);
    auto from_points = [](const std::vector<double>& w, const std::vector<CubePoint>& pts) {
        double p00 = 0.0, p01 = 0.0, p10 = 0.0, p11 = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const CubePoint& c = pts[k];
            p01 += w[k] * (1.0 - c.pi) * c.r0;
            p11 += w[k] * c.pi * c.r1;
            p00 += w[k] * (1.0 - c.pi) * (1.0 - c.r0);
            p10 += w[k] * c.pi * (1.0 - c.r1);
        }
        return JointFrequencies::from_joint(p00, p01, p10, p11);
    };
    return std::visit(Overloaded{
                          [&](const PointMass& s) { return from_points({1.0}, {s.point}); },
                          [&](const Mixture& s) { return from_points(s.weights, s.points); },
                          [](const ProductUniform& s) {
                              const double pi = s.pi.mean();
                              const double r0 = s.r0.mean();
                              const double r1 = s.r1.mean();
                              return JointFrequencies::from_joint((1.0 - pi) * (1.0 - r0), (1.0 - pi) * r0,
                                                                  pi * (1.0 - r1), pi * r1);
                          },
                      },
                      sampler);
}

double expected_ate(const Sampler& sampler) {
    validate_sampler(sampler);
    return std::visit(Overloaded{
                          [](const PointMass& s) { return s.point.r1 - s.point.r0; },
                          [](const Mixture& s) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < s.points.size(); ++k) {
                                  acc += s.weights[k] * (s.points[k].r1 - s.points[k].r0);
                              }
                              return acc;
                          },
                          [](const ProductUniform& s) { return s.r1.mean() - s.r0.mean(); },
                      },
                      sampler);
}

void TwinPairSpec::validate() const {
    validate_sampler(sampler);
    if (!(shared >= 0.0 && anti >= 0.0 && shared + anti <= 1.0)) {
        throw Error(ErrorKind::InvalidInput, "twin coupling needs shared, anti >= 0 and shared + anti <= 1");
    }
    if (pairs == 0) throw Error(ErrorKind::InvalidInput, "twin study needs at least one pair");
}

TwinSimulation simulate_twin_study(const TwinPairSpec& spec) {
    spec.validate();
    Engine engine = stream_engine(spec.seed, 0);
    IndividualDraw draw(spec.sampler);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TwinSimulation sim;
    RunningMoments psi_moments;
    double homogeneous = 0.0;
    double baseline = 0.0;
    std::uint64_t both = 0;
    std::uint64_t one = 0;
    const double independent = 1.0 - spec.shared - spec.anti;
    for (std::uint64_t j = 0; j < spec.pairs; ++j) {
        const double psi = psi_of(draw(engine), spec.trait);
        const double coupling = unit(engine);
        bool first = false;
        bool second = false;
        if (coupling < spec.shared) {
            first = second = unit(engine) < psi;
        } else if (coupling < spec.shared + spec.anti) {
            const double u = unit(engine);
            first = u < psi;
            second = (1.0 - u) < psi;
        } else {
            first = unit(engine) < psi;
            second = unit(engine) < psi;
        }
        if (first && second) ++both;
        else if (first || second) ++one;

        const double base = psi * psi + (1.0 - psi) * (1.0 - psi);
        baseline += base;
        homogeneous += spec.shared + independent * base + spec.anti * std::abs(2.0 * psi - 1.0);
        psi_moments.add(psi);
    }
    sim.counts = TwinCounts::from_cdu(both, one, spec.pairs - both - one);
    const double n = static_cast<double>(spec.pairs);
    sim.expected_homogeneous = homogeneous / n;
    sim.independent_baseline = baseline / n;
    sim.psi_mean = psi_moments.mean;
    sim.psi_variance = psi_moments.variance();
    return sim;
}

double expected_bc(const TwinPairSpec& spec) {
    spec.validate();
    const TraitMoments m = trait_moments(spec.sampler, spec.trait);
    if (spec.anti > 0.0 && !m.upper_part_known) {
        throw Error(ErrorKind::InvalidInput, "closed-form concordance unavailable for this sampler with anti > 0");
    }
    const double independent = 1.0 - spec.shared - spec.anti;
    const double both_rate = spec.shared * m.m1 + independent * m.m2 + spec.anti * m.upper_part;
    return both_rate / m.m1;
}

void CoverageSpec::validate() const {
    validate_sampler(population.sampler);
    if (population.size == 0) throw Error(ErrorKind::InvalidInput, "population size must be positive");
    if (grid == 0) throw Error(ErrorKind::InvalidInput, "grid resolution must be positive");
    if (replications == 0) throw Error(ErrorKind::InvalidInput, "coverage needs at least one replication");
    if (!(slack >= 0.0)) throw Error(ErrorKind::InvalidInput, "coverage slack must be nonnegative");
    for (const TwinCoupling* t : {&exposure_twins, &outcome_twins}) {
        if (!(t->shared >= 0.0 && t->anti >= 0.0 && t->shared + t->anti <= 1.0) || t->pairs == 0) {
            throw Error(ErrorKind::InvalidInput, "invalid twin coupling in coverage spec");
        }
    }
}

CoverageReport coverage_check(const CoverageSpec& spec, const SolverOptions& options) {
    spec.validate();
    const auto grid = std::make_shared<const Grid>(build_grid(spec.grid));
    CoverageReport report;
    report.replications.resize(spec.replications);

    auto twin_spec = [&](const TwinCoupling& c, Trait trait, std::uint64_t seed) {
        TwinPairSpec t;
        t.sampler = spec.population.sampler;
        t.trait = trait;
        t.shared = c.shared;
        t.anti = c.anti;
        t.pairs = c.pairs;
        t.seed = seed;
        return t;
    };

    for (std::size_t r = 0; r < spec.replications; ++r) {
        ReplicationOutcome& out = report.replications[r];
        const std::uint64_t base = derive_seed(spec.population.seed, r);
        const TwinPairSpec exposure = twin_spec(spec.exposure_twins, Trait::Exposure, derive_seed(base, 1));
        const TwinPairSpec outcome = twin_spec(spec.outcome_twins, Trait::Outcome, derive_seed(base, 2));
        try {
            JointFrequencies freqs;
            if (spec.exact_frequencies) {
                freqs = expected_frequencies(spec.population.sampler);
                out.true_ate = expected_ate(spec.population.sampler);
                out.bc_e = expected_bc(exposure);
                out.bc_d = expected_bc(outcome);
                const TraitMoments me = trait_moments(spec.population.sampler, Trait::Exposure);
                const TraitMoments md = trait_moments(spec.population.sampler, Trait::Outcome);
                out.exposure_variance = me.m2 - me.m1 * me.m1;
                out.outcome_variance = md.m2 - md.m1 * md.m1;
                out.exposure_cap = me.m1 * (out.bc_e - me.m1);
                out.outcome_cap = md.m1 * (out.bc_d - md.m1);
                out.exposure_assumption_holds = expected_homogeneity_holds(me, spec.exposure_twins);
                out.outcome_assumption_holds = expected_homogeneity_holds(md, spec.outcome_twins);
            } else {
                PopulationSpec pop_spec = spec.population;
                pop_spec.seed = derive_seed(base, 0);
                const Population pop = sample_population(pop_spec);
                out.table = pop.table;
                out.true_ate = pop.true_ate;
                const TwinSimulation te = simulate_twin_study(exposure);
                const TwinSimulation td = simulate_twin_study(outcome);
                const TwinStats se = twin_stats(te.counts);
                const TwinStats sd = twin_stats(td.counts);
                out.bc_e = se.bc;
                out.bc_d = sd.bc;
                out.exposure_variance = pop.variance_pi;
                out.outcome_variance = pop.variance_risk;
                out.exposure_cap = se.trait_mean * (se.bc - se.trait_mean);
                out.outcome_cap = sd.trait_mean * (sd.bc - sd.trait_mean);
                out.exposure_assumption_holds = te.assumption_holds();
                out.outcome_assumption_holds = td.assumption_holds();
                freqs = table_to_frequencies(pop.table);
            }
            const auto problem = IdentificationProblem::make(freqs, {out.bc_e, out.bc_d}, grid);
            const BoundsResult bounds = solve_bounds(problem, options);
            out.status = to_string(bounds.status);
            if (bounds.solved()) {
                out.lower = bounds.lower;
                out.upper = bounds.upper;
                // Solver round-off is not a coverage failure.
                const double margin = spec.slack + options.feasibility_tol;
                out.covered = out.true_ate >= bounds.lower - margin && out.true_ate <= bounds.upper + margin;
            } else {
                out.error = bounds.diagnostics.infeasibility_cause;
            }
        } catch (const Error& e) {
            out.status = "invalid";
            out.error = std::string(to_string(e.kind()));
        }
    }

    for (const auto& out : report.replications) {
        if (out.status == "solved") {
            ++report.solved;
            if (out.covered) ++report.covered;
        } else if (out.status == "infeasible" || out.status == "invalid") {
            ++report.infeasible;
        } else {
            ++report.failed;
        }
        if (!out.exposure_assumption_holds || !out.outcome_assumption_holds) report.assumption_violated = true;
    }
    if (report.solved > 0) {
        report.coverage = static_cast<double>(report.covered) / static_cast<double>(report.solved);
        report.meets_threshold = *report.coverage >= spec.coverage_threshold;
    }
    return report;
}

}  // namespace twinbounds::oracle
