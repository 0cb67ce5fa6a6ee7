#include <cstdlib>
#include <fstream>
#include <set>

#include "gmfs/cli.hpp"

namespace gmfs::cli {

using nlohmann::json;

namespace {

template <class T>
T get(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

const json& section(const json& doc, const char* key) {
    static const json empty = json::object();
    if (!doc.contains(key)) return empty;
    if (!doc.at(key).is_object()) throw ConfigError(std::string("section '") + key + "' must be an object");
    return doc.at(key);
}

template <class E>
E pick(const std::string& value, const char* key, std::initializer_list<std::pair<const char*, E>> options) {
    for (const auto& [name, e] : options)
        if (value == name) return e;
    throw ConfigError(std::string("field '") + key + "' has unknown value '" + value + "'");
}

WeightFn parse_weight(const json& w) {
    if (w.is_string()) {
        if (w.get<std::string>() == "one") return WeightFn::one();
        throw ConfigError("unknown weight '" + w.get<std::string>() + "'");
    }
    if (w.is_object() && w.contains("monomial") && w.at("monomial").is_number_integer()) {
        const int q = w.at("monomial").get<int>();
        if (q < 0) throw ConfigError("monomial weight power must be nonnegative");
        return WeightFn::monomial(q);
    }
    throw ConfigError("a weight is \"one\" or {\"monomial\": q}");
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{"interval", "basis", "k", "p", "weights", "index", "seed",
                                             "mc_samples", "grid_N", "output", "allow_outside_guarantees",
                                             "execution", "expand", "verify", "diag", "sde"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key)) throw ConfigError("unknown field '" + key + "'");

    RunConfig cfg;
    cfg.source = doc;
    const json& iv = section(doc, "interval");
    cfg.interval = Interval{get(iv, "t", 0.0), get(iv, "T", 1.0)};
    cfg.basis = pick<BasisKind>(get<std::string>(doc, "basis", "legendre"), "basis",
                                {{"legendre", BasisKind::Legendre}, {"trigonometric", BasisKind::Trigonometric}});
    cfg.k = get(doc, "k", 2);
    if (cfg.k < 1 || cfg.k > 4) throw ConfigError("field 'k' must be 1..4");
    if (doc.contains("p") && doc.at("p").is_array())
        cfg.p = get<std::vector<int>>(doc, "p", {});
    else
        cfg.p.assign(cfg.k, get(doc, "p", 8));
    if (doc.contains("weights")) {
        const json& w = doc.at("weights");
        cfg.weights.clear();
        if (w.is_array()) {
            for (const json& x : w) cfg.weights.push_back(parse_weight(x));
        } else {
            cfg.weights.assign(cfg.k, parse_weight(w));
        }
    } else {
        cfg.weights = uniform_weights(cfg.k);
    }
    if (doc.contains("index")) {
        cfg.index = get<std::vector<int>>(doc, "index", {});
    } else {
        cfg.index.resize(cfg.k);
        for (int l = 0; l < cfg.k; ++l) cfg.index[l] = l + 1;
    }
    const long long seed = get<long long>(doc, "seed", 1);
    if (seed < 0) throw ConfigError("field 'seed' must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.mc_samples = get(doc, "mc_samples", 1000);
    cfg.grid_N = get(doc, "grid_N", 4096);
    if (doc.contains("output")) cfg.output = get<std::string>(doc, "output", "");
    cfg.allow_outside_guarantees = get(doc, "allow_outside_guarantees", false);
    cfg.exec = pick<Execution>(get<std::string>(doc, "execution", "parallel"), "execution",
                               {{"parallel", Execution::Parallel}, {"serial", Execution::Serial}});

    const json& ex = section(doc, "expand");
    cfg.realizations = get(ex, "realizations", 10);
    auto flavor = [](const json& s, Flavor fallback) {
        if (!s.contains("flavor")) return fallback;
        return pick<Flavor>(get<std::string>(s, "flavor", ""), "flavor",
                            {{"ito", Flavor::Ito}, {"stratonovich", Flavor::Stratonovich}});
    };
    cfg.flavor = flavor(ex, Flavor::Ito);

    const json& ve = section(doc, "verify");
    if (ve.contains("flavor")) cfg.flavor = flavor(ve, cfg.flavor);
    cfg.p_list = get(ve, "p_list", cfg.p_list);
    cfg.strat_rule = pick<StratRule>(get<std::string>(ve, "strat_rule", "midpoint"), "strat_rule",
                                     {{"midpoint", StratRule::Midpoint}, {"trapezoidal", StratRule::Trapezoidal}});
    cfg.zeta_rule = pick<ZetaRule>(get<std::string>(ve, "zeta_rule", "left_point"), "zeta_rule",
                                   {{"left_point", ZetaRule::LeftPoint}, {"cell_average", ZetaRule::CellAverage}});

    const json& dg = section(doc, "diag");
    cfg.diag.p = get(dg, "p", cfg.diag.p);
    cfg.diag.kinds = get(dg, "kinds", cfg.diag.kinds);
    cfg.diag.trend_p = get(dg, "trend_p", cfg.diag.trend_p);
    cfg.diag.residual_p = get(dg, "residual_p", cfg.diag.residual_p);
    cfg.diag.b_constants_p = get(dg, "b_constants_p", cfg.diag.b_constants_p);

    const json& sd = section(doc, "sde");
    cfg.sde.model = get(sd, "model", cfg.sde.model);
    cfg.sde.lambda = get(sd, "lambda", cfg.sde.lambda);
    cfg.sde.scheme = pick<Scheme>(get<std::string>(sd, "scheme", "milstein"), "scheme",
                                  {{"euler", Scheme::Euler}, {"milstein", Scheme::Milstein}});
    cfg.sde.source.kind = pick<IntegralSourceKind>(
        get<std::string>(sd, "source", "expansion"), "source",
        {{"expansion", IntegralSourceKind::Expansion}, {"oracle", IntegralSourceKind::Oracle}});
    cfg.sde.source.p = get(sd, "p", cfg.sde.source.p);
    cfg.sde.source.basis = cfg.basis;
    cfg.sde.steps = get(sd, "steps", cfg.sde.steps);
    cfg.sde.fine_steps = get(sd, "fine_steps", cfg.sde.fine_steps);
    cfg.sde.paths = get(sd, "paths", cfg.sde.paths);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

void guarantee(bool ok, const std::string& message, const RunConfig& cfg) {
    if (!ok && !cfg.allow_outside_guarantees)
        throw ValidationError(message + " (set allow_outside_guarantees to run anyway)");
}

void validate_integral(const RunConfig& cfg) {
    require(static_cast<int>(cfg.p.size()) == cfg.k, "one truncation order per multiplicity level");
    require(static_cast<int>(cfg.weights.size()) == cfg.k, "one weight per multiplicity level");
    require(static_cast<int>(cfg.index.size()) == cfg.k, "one noise index per multiplicity level");
    for (int p : cfg.p) require(p >= 0, "truncation orders must be nonnegative");
    for (int i : cfg.index) require(i >= 0, "noise indices must be nonnegative");
    if (cfg.k >= 3)
        require(std::adjacent_find(cfg.p.begin(), cfg.p.end(), std::not_equal_to<>()) == cfg.p.end(),
                "multiplicity-3 and -4 expansions are only established for one shared truncation order");
    if (cfg.k == 4) require(cfg.p[0] <= CoeffLimits{}.max_p_k4, "multiplicity-4 tensors are capped at p = 63");
}

void validate_strat(const RunConfig& cfg) {
    if (cfg.flavor != Flavor::Stratonovich) return;
    const std::string why = strat_precondition_failure(cfg.weights);
    guarantee(why.empty(), "Stratonovich convergence not covered: " + why, cfg);
}

}  // namespace

void validate(const std::string& command, const RunConfig& cfg) {
    require(cfg.interval.T > cfg.interval.t, "interval needs t < T");
    if (command == "coeffs") {
        validate_integral(cfg);
    } else if (command == "expand") {
        validate_integral(cfg);
        validate_strat(cfg);
        require(cfg.realizations >= 1, "expand needs at least one realization");
    } else if (command == "verify") {
        validate_integral(cfg);
        validate_strat(cfg);
        require(cfg.mc_samples >= 2, "verify needs at least two Monte Carlo samples");
        require(cfg.grid_N >= 2, "verify needs a grid of at least two cells");
        if (cfg.flavor == Flavor::Stratonovich && cfg.strat_rule == StratRule::Midpoint)
            require(cfg.grid_N % 2 == 0, "midpoint Stratonovich sums need an even grid size");
        require(!cfg.p_list.empty(), "verify needs a nonempty p_list");
        for (int p : cfg.p_list) require(p >= 0, "p_list entries must be nonnegative");
        if (cfg.k == 4)
            for (int p : cfg.p_list) require(p <= CoeffLimits{}.max_p_k4, "multiplicity-4 tensors are capped at p = 63");
        bool noise = false;
        for (int i : cfg.index) noise = noise || i > 0;
        require(noise, "verify needs at least one Wiener component in the index tuple");
    } else if (command == "diag") {
        require(cfg.diag.p >= 0, "diag.p must be nonnegative");
        for (char c : cfg.diag.kinds) require(c >= 'a' && c <= 'h', "diag.kinds uses the letters a..h");
        require(std::is_sorted(cfg.diag.trend_p.begin(), cfg.diag.trend_p.end()) &&
                    std::adjacent_find(cfg.diag.trend_p.begin(), cfg.diag.trend_p.end()) == cfg.diag.trend_p.end(),
                "diag.trend_p must be strictly ascending");
        for (int p : cfg.diag.trend_p) require(p >= 0, "diag.trend_p entries must be nonnegative");
        for (int p : cfg.diag.residual_p) require(p >= 0, "diag.residual_p entries must be nonnegative");
        require(cfg.diag.b_constants_p >= 0 && cfg.diag.b_constants_p <= CoeffLimits{}.max_p_k4,
                "diag.b_constants_p must lie in 0..63");
        for (const WeightFn& w : cfg.weights) require(w.smoothness() >= 1, "trace residuals need C1 weights");
        require(cfg.weights.size() >= 2, "trace residuals need two weights");
    } else if (command == "sde") {
        const SdeOptions& s = cfg.sde;
        require(s.model == "noncommutative" || s.model == "commutative" || s.model == "scalar_linear",
                "sde.model is noncommutative, commutative or scalar_linear");
        require(s.paths >= 2, "sde needs at least two paths");
        require(s.fine_steps >= 2, "sde needs at least two fine steps");
        require(!s.steps.empty(), "sde needs at least one coarse step count");
        for (int n : s.steps) {
            require(n >= 1 && s.fine_steps % n == 0, "coarse step counts must divide sde.fine_steps");
            if (s.scheme == Scheme::Milstein && s.source.kind == IntegralSourceKind::Expansion)
                require(s.fine_steps / n >= 2, "expansion-fed steps need at least two fine cells each");
        }
        require(s.source.p >= 0, "sde.p must be nonnegative");
    } else {
        throw std::invalid_argument("unknown subcommand " + command);
    }
}

std::filesystem::path resolve_output(const std::optional<std::string>& flag, const RunConfig& cfg) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("GMFS_OUTPUT_DIR"); env && *env) return env;
    if (cfg.output && !cfg.output->empty()) return *cfg.output;
    return "gmfs_out";
}

}  // namespace gmfs::cli
