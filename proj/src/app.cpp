#include "twinbounds/app.hpp"

#include "twinbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace twinbounds::app {

double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double r = std::round(value * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

namespace {

int line_of(std::string_view text, std::string_view key) {
    const std::string quoted = "\"" + std::string(key) + "\"";
    const auto pos = text.find(quoted);
    if (pos == std::string_view::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class SchemaReader {
public:
    explicit SchemaReader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, std::string_view key, const std::string& what) const {
        std::ostringstream msg;
        msg << "config field '" << path << "': " << what;
        if (const int line = line_of(text_, key); line > 0) msg << " (line " << line << ")";
        throw Error(ErrorKind::Schema, msg.str());
    }

    Json parse() const {
        try {
            return Json::parse(text_);
        } catch (const Json::parse_error& e) {
            const auto upto = std::min<std::size_t>(e.byte, text_.size());
            const int line = 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
            throw Error(ErrorKind::Schema, "config is not valid JSON near line " + std::to_string(line));
        }
    }

    const Json& object(const Json& parent, const std::string& path, const std::string& key) const {
        if (!parent.contains(key)) fail(path + key, key, "is required");
        const Json& v = parent.at(key);
        if (!v.is_object()) fail(path + key, key, "must be an object");
        return v;
    }

    void only_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) const {
        for (const auto& [key, value] : obj.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(path + key, key, "is not a recognized field");
            }
        }
    }

    std::uint64_t count(const Json& obj, const std::string& path, const std::string& key) const {
        if (!obj.contains(key)) fail(path + key, key, "is required");
        const Json& v = obj.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(path + key, key, "must be a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::optional<std::uint64_t> optional_count(const Json& obj, const std::string& path,
                                                const std::string& key) const {
        if (!obj.contains(key)) return std::nullopt;
        return count(obj, path, key);
    }

    double number(const Json& obj, const std::string& path, const std::string& key) const {
        if (!obj.contains(key)) fail(path + key, key, "is required");
        const Json& v = obj.at(key);
        if (!v.is_number()) fail(path + key, key, "must be a number");
        return v.get<double>();
    }

    std::optional<double> optional_number(const Json& obj, const std::string& path, const std::string& key) const {
        if (!obj.contains(key)) return std::nullopt;
        return number(obj, path, key);
    }

    std::optional<double> probability(const Json& obj, const std::string& path, const std::string& key) const {
        auto v = optional_number(obj, path, key);
        if (v && !(*v >= 0.0 && *v <= 1.0)) fail(path + key, key, "must lie in [0,1]");
        return v;
    }

    CubePoint point(const Json& v, const std::string& path, std::string_view key) const {
        if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); })) {
            fail(path, key, "must be an array [pi, r0, r1]");
        }
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    oracle::UniformRange range(const Json& obj, const std::string& path, const std::string& key) const {
        if (!obj.contains(key)) fail(path + key, key, "is required");
        const Json& v = obj.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            fail(path + key, key, "must be an array [lo, hi]");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

private:
    std::string_view text_;
};

Json table_json(const ContingencyTable& t) {
    return Json{{"e0_d0", t.n_e0_d0}, {"e0_d1", t.n_e0_d1}, {"e1_d0", t.n_e1_d0}, {"e1_d1", t.n_e1_d1}};
}

Json tool_json() {
    return Json{{"name", kToolName}, {"version", kToolVersion}};
}

Json witness_json(const WitnessSummary& w, const JointFrequencies& freqs) {
    Json cells = Json::array();
    for (const auto& c : w.top_cells) {
        cells.push_back(Json{{"index", c.index},
                             {"pi", round_to(c.point.pi, 6)},
                             {"r0", round_to(c.point.r0, 6)},
                             {"r1", round_to(c.point.r1, 6)},
                             {"mass", round_to(c.mass, 6)}});
    }
    return Json{{"value", round_to(w.value, 4)},
                {"mean_pi", round_to(w.mean_pi, 6)},
                {"mean_risk", round_to(w.mean_risk, 6)},
                {"exposure_variance", round_to(w.exposure_variance, 6)},
                {"risk_variance", round_to(w.risk_variance, 6)},
                {"implied_p_e1_d0", round_to(w.implied_e1_d0, 6)},
                {"observed_p_e1_d0", round_to(freqs.p_e1_d0, 6)},
                {"exposure_cap_active", w.exposure_cap_active},
                {"risk_cap_active", w.risk_cap_active},
                {"support_size", w.support_size},
                {"iterations", w.iterations},
                {"top_cells", cells}};
}

Json percentile_json(const std::optional<PercentileSummary>& p) {
    if (!p) return nullptr;
    return Json{{"p2_5", round_to(p->p2_5, 4)}, {"p50", round_to(p->p50, 4)}, {"p97_5", round_to(p->p97_5, 4)}};
}

Json bootstrap_json(const BootstrapConfig& config, const BootstrapReport& report) {
    Json reps = Json::array();
    for (const auto& r : report.replicates) {
        Json entry{{"table", table_json(r.table)}, {"status", r.status}};
        if (r.status == "solved") {
            entry["lower"] = round_to(r.lower, 4);
            entry["upper"] = round_to(r.upper, 4);
        } else {
            entry["error"] = r.error;
        }
        reps.push_back(std::move(entry));
    }
    return Json{{"replicates", config.replicates},
                {"seed", config.seed},
                {"threshold", config.threshold},
                {"solved", report.solved},
                {"infeasible", report.infeasible},
                {"failed", report.failed},
                {"lower", percentile_json(report.lower)},
                {"upper", percentile_json(report.upper)},
                {"replicate_bounds", reps}};
}

}  // namespace

ConcordanceSpec AnalyzeConfig::concordance() const {
    ConcordanceSpec spec;
    spec.bc_e = bc_e ? *bc_e : pc_to_bc(pc_e.value_or(0.0));
    spec.bc_d = bc_d ? *bc_d : pc_to_bc(pc_d.value_or(0.0));
    spec.validate();
    return spec;
}

AnalyzeConfig parse_analyze_config(std::string_view text) {
    const SchemaReader reader(text);
    const Json root = reader.parse();
    if (!root.is_object()) throw Error(ErrorKind::Schema, "config must be a JSON object");
    reader.only_keys(root, "", {"table", "concordance", "grid", "estimand", "bootstrap", "source", "description"});

    AnalyzeConfig config;
    const Json& table = reader.object(root, "", "table");
    reader.only_keys(table, "table.", {"e0_d0", "e0_d1", "e1_d0", "e1_d1"});
    config.table.n_e0_d0 = reader.count(table, "table.", "e0_d0");
    config.table.n_e0_d1 = reader.count(table, "table.", "e0_d1");
    config.table.n_e1_d0 = reader.count(table, "table.", "e1_d0");
    config.table.n_e1_d1 = reader.count(table, "table.", "e1_d1");

    const Json& conc = reader.object(root, "", "concordance");
    reader.only_keys(conc, "concordance.", {"bc_e", "pc_e", "bc_d", "pc_d"});
    config.bc_e = reader.probability(conc, "concordance.", "bc_e");
    config.pc_e = reader.probability(conc, "concordance.", "pc_e");
    config.bc_d = reader.probability(conc, "concordance.", "bc_d");
    config.pc_d = reader.probability(conc, "concordance.", "pc_d");
    if (config.bc_e.has_value() == config.pc_e.has_value()) {
        reader.fail("concordance.bc_e", "concordance", "exactly one of bc_e or pc_e is required");
    }
    if (config.bc_d.has_value() == config.pc_d.has_value()) {
        reader.fail("concordance.bc_d", "concordance", "exactly one of bc_d or pc_d is required");
    }
    for (const char* key : {"bc_e", "pc_e", "bc_d", "pc_d"}) {
        if (conc.contains(key) && conc.at(key).get<double>() == 0.0) {
            reader.fail(std::string("concordance.") + key, key, "must be positive");
        }
    }

    if (const auto grid = reader.optional_count(root, "", "grid")) {
        if (*grid == 0) reader.fail("grid", "grid", "must be at least 1");
        config.grid = static_cast<std::size_t>(*grid);
    }
    if (root.contains("estimand")) {
        if (!root.at("estimand").is_string()) reader.fail("estimand", "estimand", "must be a string");
        try {
            config.estimand = parse_estimand(root.at("estimand").get<std::string>());
        } catch (const Error& e) {
            reader.fail("estimand", "estimand", e.what());
        }
    }
    if (root.contains("bootstrap")) {
        const Json& boot = reader.object(root, "", "bootstrap");
        reader.only_keys(boot, "bootstrap.", {"replicates", "seed", "threshold"});
        BootstrapConfig b;
        if (auto v = reader.optional_count(boot, "bootstrap.", "replicates")) b.replicates = static_cast<std::size_t>(*v);
        if (auto v = reader.optional_count(boot, "bootstrap.", "seed")) b.seed = *v;
        if (auto v = reader.optional_count(boot, "bootstrap.", "threshold")) b.threshold = *v;
        if (b.replicates == 0) reader.fail("bootstrap.replicates", "replicates", "must be at least 1");
        config.bootstrap = b;
    }
    if (root.contains("source")) config.source = root.at("source");
    return config;
}

AnalyzeOutcome run_analyze(const AnalyzeConfig& config, const RunOptions& options) {
    const JointFrequencies freqs = table_to_frequencies(config.table);
    const ConcordanceSpec concordance = config.concordance();
    const auto grid = std::make_shared<const Grid>(build_grid(config.grid));
    const auto problem = IdentificationProblem::make(freqs, concordance, grid, config.estimand);

    AnalyzeOutcome out;
    out.bounds = solve_bounds(problem);
    const BoundsResult& bounds = out.bounds;

    Json conc_json{{"bc_e", round_to(concordance.bc_e, 4)}, {"bc_d", round_to(concordance.bc_d, 4)}};
    if (config.pc_e) conc_json["pc_e"] = *config.pc_e;
    if (config.pc_d) conc_json["pc_d"] = *config.pc_d;

    Json rr = nullptr;
    try {
        rr = round_to(relative_risk(freqs), 4);
    } catch (const Error&) {
        // Zero unexposed risk: the ratio is undefined but bounds still are.
    }

    Json bounds_json{{"lower", nullptr}, {"upper", nullptr}, {"status", to_string(bounds.status)}};
    Json zero_flag = nullptr;
    if (bounds.solved()) {
        const double lo = round_to(bounds.lower, 4);
        const double hi = round_to(bounds.upper, 4);
        bounds_json["lower"] = lo;
        bounds_json["upper"] = hi;
        zero_flag = lo <= 0.0 && 0.0 <= hi;
    }

    Json diag{{"infeasibility_cause", bounds.diagnostics.infeasibility_cause},
              {"message", bounds.diagnostics.message},
              {"min_witness", nullptr},
              {"max_witness", nullptr}};
    if (bounds.diagnostics.min_witness) diag["min_witness"] = witness_json(*bounds.diagnostics.min_witness, freqs);
    if (bounds.diagnostics.max_witness) diag["max_witness"] = witness_json(*bounds.diagnostics.max_witness, freqs);

    Json input{{"table", table_json(config.table)},
               {"concordance", conc_json},
               {"grid", config.grid},
               {"estimand", to_string(config.estimand)}};
    if (!config.source.is_null()) input["source"] = config.source;

    const BootstrapConfig boot_config = config.bootstrap.value_or(BootstrapConfig{});
    Json report{{"tool", tool_json()},
                {"kind", "analyze"},
                {"input", input},
                {"frequencies",
                 {{"p_e0_d0", round_to(freqs.p_e0_d0, 6)},
                  {"p_e0_d1", round_to(freqs.p_e0_d1, 6)},
                  {"p_e1_d0", round_to(freqs.p_e1_d0, 6)},
                  {"p_e1_d1", round_to(freqs.p_e1_d1, 6)},
                  {"p_e1", round_to(freqs.p_e1, 6)},
                  {"p_d1", round_to(freqs.p_d1, 6)}}},
                {"relative_risk", rr},
                {"caps",
                 {{"exposure",
                   {{"trait_mean", round_to(problem.exposure_cap.trait_mean, 6)},
                    {"cap", round_to(problem.exposure_cap.cap, 6)}}},
                  {"risk",
                   {{"trait_mean", round_to(problem.risk_cap.trait_mean, 6)},
                    {"cap", round_to(problem.risk_cap.cap, 6)}}}}},
                {"bounds", bounds_json},
                {"zero_in_interval", zero_flag},
                {"diagnostics", diag},
                {"small_cells", small_cell_flags(config.table, boot_config.threshold)},
                {"bootstrap", nullptr},
                {"wall_clock_seconds", nullptr}};

    if (options.run_bootstrap) {
        const BootstrapReport boot =
            bootstrap_bounds(config.table, concordance, grid, config.estimand, boot_config);
        report["bootstrap"] = bootstrap_json(boot_config, boot);
    }
    set_wall_clock(report, options.wall_clock_seconds);

    switch (bounds.status) {
        case BoundsStatus::Solved: out.exit_code = kExitSolved; break;
        case BoundsStatus::Infeasible: out.exit_code = kExitInfeasible; break;
        case BoundsStatus::NumericFailure: out.exit_code = kExitNumericFailure; break;
    }
    out.report = std::move(report);
    return out;
}

void set_wall_clock(Json& report, std::optional<double> seconds) {
    if (seconds) report["wall_clock_seconds"] = round_to(*seconds, 3);
    else report["wall_clock_seconds"] = nullptr;
}

std::string pretty_analyze(const Json& report) {
    std::ostringstream out;
    out << std::fixed;
    const Json& in = report.at("input");
    const Json& t = in.at("table");
    out << "table        e0_d0=" << t.at("e0_d0").get<std::uint64_t>() << "  e0_d1=" << t.at("e0_d1").get<std::uint64_t>()
        << "  e1_d0=" << t.at("e1_d0").get<std::uint64_t>() << "  e1_d1=" << t.at("e1_d1").get<std::uint64_t>() << "\n";
    out << std::setprecision(4);
    out << "P(e=1)       " << report.at("frequencies").at("p_e1").get<double>() << "\n";
    out << "P(d=1)       " << report.at("frequencies").at("p_d1").get<double>() << "\n";
    if (!report.at("relative_risk").is_null()) {
        out << std::setprecision(2) << "RR           " << report.at("relative_risk").get<double>() << "\n";
    }
    out << std::setprecision(2);
    out << "BC_e, BC_d   " << in.at("concordance").at("bc_e").get<double>() << ", "
        << in.at("concordance").at("bc_d").get<double>() << "\n";
    out << "grid         " << in.at("grid").get<std::size_t>() << "^3, estimand " << in.at("estimand").get<std::string>() << "\n";
    const Json& b = report.at("bounds");
    if (b.at("status") == "solved") {
        out << "bounds       [" << b.at("lower").get<double>() << ", " << b.at("upper").get<double>() << "]\n";
        out << "zero inside  " << (report.at("zero_in_interval").get<bool>() ? "yes" : "no") << "\n";
    } else {
        out << "bounds       " << b.at("status").get<std::string>() << " ("
            << report.at("diagnostics").at("infeasibility_cause").get<std::string>() << ")\n";
        out << "             " << report.at("diagnostics").at("message").get<std::string>() << "\n";
    }
    if (!report.at("small_cells").empty()) {
        out << "small cells  ";
        for (const auto& c : report.at("small_cells")) out << c.get<std::string>() << ' ';
        out << "\n";
    }
    if (!report.at("bootstrap").is_null()) {
        const Json& boot = report.at("bootstrap");
        out << "bootstrap    " << boot.at("solved").get<std::size_t>() << " solved, "
            << boot.at("infeasible").get<std::size_t>() << " infeasible, " << boot.at("failed").get<std::size_t>()
            << " failed\n";
        for (const char* end : {"lower", "upper"}) {
            const Json& p = boot.at(end);
            if (p.is_null()) continue;
            out << "  " << end << "      2.5%=" << p.at("p2_5").get<double>() << "  50%=" << p.at("p50").get<double>()
                << "  97.5%=" << p.at("p97_5").get<double>() << "\n";
        }
    }
    return out.str();
}

SimulateConfig parse_simulate_config(std::string_view text) {
    const SchemaReader reader(text);
    const Json root = reader.parse();
    if (!root.is_object()) throw Error(ErrorKind::Schema, "simulate spec must be a JSON object");
    reader.only_keys(root, "", {"population", "exposure_twins", "outcome_twins", "grid", "replications", "slack",
                                "exact_frequencies", "coverage_threshold", "source", "description"});
    SimulateConfig config;
    oracle::CoverageSpec& spec = config.spec;

    const Json& pop = reader.object(root, "", "population");
    reader.only_keys(pop, "population.", {"sampler", "size", "seed"});
    const Json& sampler = reader.object(pop, "population.", "sampler");
    if (!sampler.contains("kind") || !sampler.at("kind").is_string()) {
        reader.fail("population.sampler.kind", "kind", "must be point_mass, mixture or product_uniform");
    }
    const std::string kind = sampler.at("kind").get<std::string>();
    const std::string sp = "population.sampler.";
    if (kind == "point_mass") {
        reader.only_keys(sampler, sp, {"kind", "point"});
        if (!sampler.contains("point")) reader.fail(sp + "point", "point", "is required");
        spec.population.sampler = oracle::PointMass{reader.point(sampler.at("point"), sp + "point", "point")};
    } else if (kind == "mixture") {
        reader.only_keys(sampler, sp, {"kind", "weights", "points"});
        if (!sampler.contains("weights") || !sampler.at("weights").is_array()) {
            reader.fail(sp + "weights", "weights", "must be an array of numbers");
        }
        if (!sampler.contains("points") || !sampler.at("points").is_array()) {
            reader.fail(sp + "points", "points", "must be an array of [pi, r0, r1]");
        }
        oracle::Mixture mix;
        for (const auto& w : sampler.at("weights")) {
            if (!w.is_number()) reader.fail(sp + "weights", "weights", "must be an array of numbers");
            mix.weights.push_back(w.get<double>());
        }
        for (const auto& p : sampler.at("points")) mix.points.push_back(reader.point(p, sp + "points", "points"));
        spec.population.sampler = std::move(mix);
    } else if (kind == "product_uniform") {
        reader.only_keys(sampler, sp, {"kind", "pi", "r0", "r1"});
        spec.population.sampler = oracle::ProductUniform{reader.range(sampler, sp, "pi"), reader.range(sampler, sp, "r0"),
                                                         reader.range(sampler, sp, "r1")};
    } else {
        reader.fail(sp + "kind", "kind", "must be point_mass, mixture or product_uniform");
    }
    if (auto v = reader.optional_count(pop, "population.", "size")) spec.population.size = *v;
    if (auto v = reader.optional_count(pop, "population.", "seed")) spec.population.seed = *v;

    auto coupling = [&](const std::string& key, oracle::TwinCoupling& c) {
        if (!root.contains(key)) return;
        const Json& obj = reader.object(root, "", key);
        reader.only_keys(obj, key + ".", {"shared", "anti", "pairs"});
        if (auto v = reader.probability(obj, key + ".", "shared")) c.shared = *v;
        if (auto v = reader.probability(obj, key + ".", "anti")) c.anti = *v;
        if (auto v = reader.optional_count(obj, key + ".", "pairs")) c.pairs = *v;
    };
    coupling("exposure_twins", spec.exposure_twins);
    coupling("outcome_twins", spec.outcome_twins);

    if (auto v = reader.optional_count(root, "", "grid")) spec.grid = static_cast<std::size_t>(*v);
    if (auto v = reader.optional_count(root, "", "replications")) spec.replications = static_cast<std::size_t>(*v);
    if (auto v = reader.optional_number(root, "", "slack")) spec.slack = *v;
    if (auto v = reader.probability(root, "", "coverage_threshold")) spec.coverage_threshold = *v;
    if (root.contains("exact_frequencies")) {
        if (!root.at("exact_frequencies").is_boolean()) {
            reader.fail("exact_frequencies", "exact_frequencies", "must be true or false");
        }
        spec.exact_frequencies = root.at("exact_frequencies").get<bool>();
    }
    if (root.contains("source")) config.source = root.at("source");
    try {
        spec.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::Schema, std::string("simulate spec: ") + e.what());
    }
    return config;
}

namespace {

Json sampler_json(const oracle::Sampler& sampler) {
    auto pt = [](const CubePoint& p) { return Json::array({p.pi, p.r0, p.r1}); };
    if (const auto* s = std::get_if<oracle::PointMass>(&sampler)) {
        return Json{{"kind", "point_mass"}, {"point", pt(s->point)}};
    }
    if (const auto* s = std::get_if<oracle::Mixture>(&sampler)) {
        Json points = Json::array();
        for (const auto& p : s->points) points.push_back(pt(p));
        return Json{{"kind", "mixture"}, {"weights", s->weights}, {"points", points}};
    }
    const auto& s = std::get<oracle::ProductUniform>(sampler);
    auto rng = [](const oracle::UniformRange& r) { return Json::array({r.lo, r.hi}); };
    return Json{{"kind", "product_uniform"}, {"pi", rng(s.pi)}, {"r0", rng(s.r0)}, {"r1", rng(s.r1)}};
}

Json coupling_json(const oracle::TwinCoupling& c) {
    return Json{{"shared", c.shared}, {"anti", c.anti}, {"pairs", c.pairs}};
}

}  // namespace

SimulateOutcome run_simulate(const SimulateConfig& config, const RunOptions& options) {
    const oracle::CoverageSpec& spec = config.spec;
    const oracle::CoverageReport cov = oracle::coverage_check(spec);

    Json input{{"population",
                {{"sampler", sampler_json(spec.population.sampler)},
                 {"size", spec.population.size},
                 {"seed", spec.population.seed}}},
               {"exposure_twins", coupling_json(spec.exposure_twins)},
               {"outcome_twins", coupling_json(spec.outcome_twins)},
               {"grid", spec.grid},
               {"replications", spec.replications},
               {"slack", spec.slack},
               {"exact_frequencies", spec.exact_frequencies},
               {"coverage_threshold", spec.coverage_threshold}};
    if (!config.source.is_null()) input["source"] = config.source;

    Json reps = Json::array();
    for (const auto& r : cov.replications) {
        Json entry{{"status", r.status},
                   {"true_ate", round_to(r.true_ate, 6)},
                   {"lower", nullptr},
                   {"upper", nullptr},
                   {"covered", r.covered},
                   {"bc_e", round_to(r.bc_e, 6)},
                   {"bc_d", round_to(r.bc_d, 6)},
                   {"exposure_variance", round_to(r.exposure_variance, 6)},
                   {"exposure_cap", round_to(r.exposure_cap, 6)},
                   {"outcome_variance", round_to(r.outcome_variance, 6)},
                   {"outcome_cap", round_to(r.outcome_cap, 6)},
                   {"assumption_holds",
                    {{"exposure", r.exposure_assumption_holds}, {"outcome", r.outcome_assumption_holds}}}};
        if (!spec.exact_frequencies) entry["table"] = table_json(r.table);
        if (r.status == "solved") {
            entry["lower"] = round_to(r.lower, 4);
            entry["upper"] = round_to(r.upper, 4);
        } else {
            entry["error"] = r.error;
        }
        reps.push_back(std::move(entry));
    }

    Json coverage{{"replications", cov.replications.size()},
                  {"solved", cov.solved},
                  {"infeasible", cov.infeasible},
                  {"failed", cov.failed},
                  {"covered", cov.covered},
                  {"coverage", cov.coverage ? Json(round_to(*cov.coverage, 4)) : Json(nullptr)},
                  {"meets_threshold", cov.meets_threshold},
                  {"assumption_violated", cov.assumption_violated},
                  {"runs", reps}};

    SimulateOutcome out;
    out.report = Json{{"tool", tool_json()},
                      {"kind", "simulate"},
                      {"input", input},
                      {"coverage", coverage},
                      {"wall_clock_seconds", nullptr}};
    set_wall_clock(out.report, options.wall_clock_seconds);
    out.exit_code = cov.meets_threshold ? kExitSolved : kExitInfeasible;
    return out;
}

std::string pretty_simulate(const Json& report) {
    const Json& c = report.at("coverage");
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "replications " << c.at("replications").get<std::size_t>() << " (" << c.at("solved").get<std::size_t>()
        << " solved, " << c.at("infeasible").get<std::size_t>() << " infeasible, " << c.at("failed").get<std::size_t>()
        << " failed)\n";
    out << "coverage     ";
    if (c.at("coverage").is_null()) out << "n/a";
    else out << c.at("coverage").get<double>();
    out << " (threshold " << report.at("input").at("coverage_threshold").get<double>() << ", "
        << (c.at("meets_threshold").get<bool>() ? "met" : "not met") << ")\n";
    if (c.at("assumption_violated").get<bool>()) {
        out << "warning      simulated twins violate the homogeneity assumption\n";
    }
    return out.str();
}

}  // namespace twinbounds::app
