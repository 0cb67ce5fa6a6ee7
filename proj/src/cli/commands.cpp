#include <cmath>
#include <cstdio>
#include <fstream>

#include "gmfs/cli.hpp"
#include "gmfs/error.hpp"

namespace gmfs::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

class Csv {
public:
    Csv(const fs::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
        if (!out_) throw std::runtime_error("write failed for " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream out_;
};

// NaN and infinities have no JSON literal.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_report(const fs::path& dir, const std::string& command, const RunConfig& cfg, json results) {
    json doc;
    doc["command"] = command;
    doc["seed"] = cfg.seed;
    doc["config"] = cfg.source;
    doc["results"] = std::move(results);
    const fs::path path = dir / "report.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> weight_labels(const std::vector<WeightFn>& w) {
    std::vector<std::string> out;
    for (const WeightFn& x : w) out.push_back(x.label());
    return out;
}

BasisSystem basis_of(const RunConfig& cfg) { return BasisSystem(cfg.basis, make_interval(cfg.interval.t, cfg.interval.T)); }

void run_coeffs(const RunConfig& cfg, const fs::path& out) {
    const BasisSystem basis = basis_of(cfg);
    const CoeffTensor C = coeff_tensor(cfg.p, cfg.weights, basis, cfg.exec);
    std::vector<std::string> header;
    for (int l = 1; l <= cfg.k; ++l) header.push_back("j" + std::to_string(l));
    header.push_back("value");
    Csv csv(out / "tensor.csv", header);
    std::vector<int> j(cfg.k, 0);
    double sum_sq = 0.0;
    for (double v : C.values()) {
        std::vector<std::string> cells;
        for (int x : j) cells.push_back(std::to_string(x));
        cells.push_back(format_number(v));
        csv.row(cells);
        sum_sq += v * v;
        for (int l = cfg.k - 1; l >= 0; --l) {
            if (++j[l] <= cfg.p[l]) break;
            j[l] = 0;
        }
    }
    const double norm = kernel_norm_sq(cfg.weights, basis.interval());
    json res;
    res["entries"] = C.values().size();
    res["weights"] = weight_labels(cfg.weights);
    res["kernel_norm_sq"] = norm;
    res["coeff_sum_sq"] = sum_sq;
    res["parseval_gap"] = norm - sum_sq;
    if (cfg.k == 2) {
        const int q = std::min(cfg.p[0], cfg.p[1]);
        const double tr = trace_sum(q, cfg.weights[0], cfg.weights[1], basis);
        res["trace_sum"] = tr;
        res["trace_residual"] = trace_residual(q, cfg.weights[0], cfg.weights[1], basis);
    }
    write_report(out, "coeffs", cfg, res);
}

void run_expand(const RunConfig& cfg, const fs::path& out) {
    const BasisSystem basis = basis_of(cfg);
    const CoeffTensor C = coeff_tensor(cfg.p, cfg.weights, basis, cfg.exec);
    const TruncationSpec spec = cfg.k >= 3 ? TruncationSpec::uniform(cfg.k, cfg.p[0]) : TruncationSpec::rectangular(cfg.p);
    const int m = std::max(1, *std::max_element(cfg.index.begin(), cfg.index.end()));
    const int pmax = *std::max_element(cfg.p.begin(), cfg.p.end());
    Csv csv(out / "realizations.csv", {"sample", "table_seed", "value"});
    std::vector<double> vals;
    for (int s = 0; s < cfg.realizations; ++s) {
        const std::uint64_t ts = path_seed(cfg.seed, s);
        const GaussianTable Z = sample_table(ts, m, pmax, basis);
        const double v = cfg.flavor == Flavor::Ito ? ito_truncated(C, Z, cfg.index, spec)
                                                   : strat_truncated(C, Z, cfg.index, spec);
        if (!std::isfinite(v)) throw std::range_error("non-finite realization at sample " + std::to_string(s));
        vals.push_back(v);
        csv.row({std::to_string(s), std::to_string(ts), format_number(v)});
    }
    const SampleStats st = sample_stats(vals);
    json res;
    res["flavor"] = cfg.flavor == Flavor::Ito ? "ito" : "stratonovich";
    res["weights"] = weight_labels(cfg.weights);
    res["mean"] = st.mean;
    res["std_error"] = st.std_error;
    const std::string why = cfg.flavor == Flavor::Stratonovich ? strat_precondition_failure(cfg.weights) : "";
    res["outside_guarantees"] = why.empty() ? json(nullptr) : json(why);
    write_report(out, "expand", cfg, res);
}

void run_verify(const RunConfig& cfg, const fs::path& out) {
    MseConfig mc;
    mc.weights = cfg.weights;
    mc.idx = cfg.index;
    mc.basis = basis_of(cfg);
    mc.p_list = cfg.p_list;
    mc.N = cfg.grid_N;
    mc.samples = cfg.mc_samples;
    mc.seed = cfg.seed;
    mc.flavor = cfg.flavor;
    mc.strat_rule = cfg.strat_rule;
    mc.zeta_rule = cfg.zeta_rule;
    mc.exec = cfg.exec;
    const std::vector<MseRow> rows = mse_study(mc);
    Csv csv(out / "mse.csv", {"p", "mse", "parseval_bound", "ci_halfwidth"});
    json res = json::array();
    for (const MseRow& r : rows) {
        if (!std::isfinite(r.mse)) throw std::range_error("non-finite mean-square error at p = " + std::to_string(r.p));
        csv.row({std::to_string(r.p), format_number(r.mse), format_number(r.parseval_bound), format_number(r.ci_halfwidth)});
        res.push_back({{"p", r.p}, {"mse", r.mse}, {"std_error", r.std_error}, {"ci_halfwidth", r.ci_halfwidth},
                       {"parseval_bound", number(r.parseval_bound)}});
    }
    write_report(out, "verify", cfg, {{"rows", res}});
}

void run_diag(const RunConfig& cfg, const fs::path& out) {
    const BasisSystem basis = basis_of(cfg);
    const double L = basis.interval().length();
    const int p = cfg.diag.p;
    json res;

    json residuals = json::array();
    const WeightFn one = WeightFn::one();
    for (int q : cfg.diag.residual_p)
        residuals.push_back({{"p", q},
                             {"unit_weights", trace_residual(q, one, one, basis)},
                             {"config_weights", trace_residual(q, cfg.weights[0], cfg.weights[1], basis)}});
    res["trace_residuals"] = residuals;

    json tables = json::object();
    for (char tag : cfg.diag.kinds) {
        const DeltaKind kind = delta_kind_from_char(tag);
        const DeltaTable t = delta_table(kind, p, basis);
        Csv csv(out / (std::string("delta_") + tag + ".csv"), {"row", "col", "value"});
        for (int r = 0; r <= p; ++r)
            for (int c = 0; c <= p; ++c) csv.row({std::to_string(r), std::to_string(c), format_number(t(r, c))});
        json trend = json::array();
        for (const TrendRow& tr : delta_sum_trend(kind, cfg.diag.trend_p, basis)) {
            const double m2 = delta_second_moment(kind, tr.p, IndexCase::EqualNonzero, basis);
            trend.push_back({{"p", tr.p}, {"diagonal_sum", tr.diagonal_sum}, {"second_moment_equal", m2}});
        }
        tables[std::string(1, tag)] = {
            {"p", p},
            {"diagonal_sum", t.trace()},
            {"second_moment",
             {{"equal_nonzero", delta_second_moment(t, IndexCase::EqualNonzero, basis.interval())},
              {"distinct_nonzero", delta_second_moment(t, IndexCase::DistinctNonzero, basis.interval())},
              {"row_zero", delta_second_moment(t, IndexCase::RowZero, basis.interval())},
              {"column_zero", delta_second_moment(t, IndexCase::ColumnZero, basis.interval())},
              {"both_zero", delta_second_moment(t, IndexCase::BothZero, basis.interval())}}},
            {"trend", trend}};
    }
    res["delta"] = tables;

    const DeltaTable g = delta_table(DeltaKind::g, p, basis);
    json closed;
    if (cfg.basis == BasisKind::Legendre) {
        const double expect = L * L / (8.0 * (2 * p + 3) * (2 * p + 1));
        double off = 0.0;
        for (int r = 0; r <= p; ++r)
            for (int c = 0; c <= p; ++c)
                if (r != p || c != p) off = std::max(off, std::abs(g(r, c) + g(c, r)));
        closed = {{"g_pp", g(p, p)}, {"g_pp_expected", expect}, {"g_pp_error", std::abs(g(p, p) - expect)},
                  {"symmetrized_off_corner_max", off}};
    } else {
        double off = 0.0;
        for (int r = 0; r <= p; ++r)
            for (int c = 0; c <= p; ++c)
                if (r || c) off = std::max(off, std::abs(g(r, c) + g(c, r)));
        closed = {{"g_00", g(0, 0)}, {"p_times_g_00", p * g(0, 0)}, {"symmetrized_off_corner_max", off}};
    }
    res["closed_form"] = closed;

    const BConstants b = b_constants(cfg.diag.b_constants_p, basis);
    res["b_constants"] = {{"p", cfg.diag.b_constants_p}, {"b1", b.b1}, {"b1_limit", L * L / 8.0}, {"b2", b.b2}, {"b3", b.b3}};

    json pointwise = json::array();
    for (int q : {16, 64, 256})
        pointwise.push_back({{"p", q},
                             {"deviation", pointwise_trace_deviation(cfg.weights[0], cfg.weights[1], q, basis)},
                             {"mirror_deviation", pointwise_trace_deviation(cfg.weights[0], cfg.weights[1], q, basis, true)}});
    res["pointwise_trace"] = pointwise;
    write_report(out, "diag", cfg, res);
}

void run_sde(const RunConfig& cfg, const fs::path& out) {
    const SdeOptions& s = cfg.sde;
    SdeModel model = s.model == "commutative"     ? SdeModel::commutative()
                     : s.model == "scalar_linear" ? SdeModel::scalar_linear(s.lambda)
                                                  : SdeModel::noncommutative();
    model.interval = make_interval(cfg.interval.t, cfg.interval.T);
    StudyConfig sc;
    sc.scheme = s.scheme;
    sc.source = s.source;
    sc.steps = s.steps;
    sc.fine_steps = s.fine_steps;
    sc.paths = s.paths;
    sc.seed = cfg.seed;
    sc.exec = cfg.exec;
    const StudyResult r = strong_order_study(model, sc);
    Csv csv(out / "strong_order.csv", {"steps", "h", "mean_error", "std_error"});
    json rows = json::array();
    for (const StudyRow& row : r.rows) {
        csv.row({std::to_string(row.steps), format_number(row.h), format_number(row.mean_error), format_number(row.std_error)});
        rows.push_back({{"steps", row.steps}, {"h", row.h}, {"mean_error", row.mean_error}, {"std_error", row.std_error}});
    }
    write_report(out, "sde", cfg,
                 {{"model", model.name}, {"scheme", to_string(s.scheme)}, {"rows", rows}, {"slope", number(r.slope)}});
}

}  // namespace

void run_command(const std::string& command, const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    if (command == "coeffs") run_coeffs(cfg, out);
    else if (command == "expand") run_expand(cfg, out);
    else if (command == "verify") run_verify(cfg, out);
    else if (command == "diag") run_diag(cfg, out);
    else if (command == "sde") run_sde(cfg, out);
    else throw std::invalid_argument("unknown subcommand " + command);
}

}  // namespace gmfs::cli
