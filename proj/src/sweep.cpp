#include "qmono/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qmono/errors.hpp"
#include "qmono/frac.hpp"
#include "qmono/monotone.hpp"
#include "qmono/mvt.hpp"
#include "qmono/oracle.hpp"
#include "qmono/random.hpp"

namespace qmono {

namespace {

struct TheoremInfo {
    SweepTheorem id;
    std::string_view cli;
    std::string_view report;
};

constexpr TheoremInfo kTheorems[] = {
    {SweepTheorem::Thm1, "thm1", "THM1"},
    {SweepTheorem::Converse, "converse", "THM_CONVERSE"},
    {SweepTheorem::Strict, "strict", "THM_STRICT"},
    {SweepTheorem::Decreasing1, "dec1", "THM_DEC1"},
    {SweepTheorem::Decreasing2, "dec2", "THM_DEC2"},
    {SweepTheorem::Corollary, "corollary", "COROLLARY"},
    {SweepTheorem::Tool, "tool", "TOOL"},
    {SweepTheorem::Mvt, "mvt", "MVT"},
};

const TheoremInfo& info(SweepTheorem t) {
    for (const auto& i : kTheorems) {
        if (i.id == t) return i;
    }
    throw std::logic_error("unknown sweep theorem");
}

template <class T>
std::vector<T> read_list(const nlohmann::json& j, const char* field) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError(std::string(field) + ": expected a non-empty array");
    }
    std::vector<T> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const auto& v = j[k];
        if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) {
                throw ConfigError(std::string(field) + "[" + std::to_string(k) + "]: expected an integer");
            }
        } else if (!v.is_number()) {
            throw ConfigError(std::string(field) + "[" + std::to_string(k) + "]: expected a number");
        }
        out.push_back(v.get<T>());
    }
    return out;
}

double read_number(const nlohmann::json& j, const char* field) {
    if (!j.is_number()) throw ConfigError(std::string(field) + ": expected a number");
    return j.get<double>();
}

std::string opt_double(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }
std::string opt_int(const std::optional<int>& x) { return x ? std::to_string(*x) : std::string(); }

nlohmann::json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

SweepRow base_row(SweepTheorem t, double q, double alpha, int n0, int window, std::uint64_t seed) {
    SweepRow r{};
    r.theorem_id = std::string(info(t).report);
    r.q = q;
    r.alpha = alpha;
    r.n0 = n0;
    r.window = window;
    r.seed = seed;
    r.replay = {{"theorem", r.theorem_id}, {"q", q}, {"alpha", alpha}, {"n0", n0}, {"seed", seed}};
    return r;
}

void fill_from_report(SweepRow& row, const MonotonicityReport& rep) {
    row.hypotheses_hold = rep.hypotheses_hold;
    row.conclusion_holds = rep.conclusion_holds;
    row.worst_margin = rep.worst_margin();
    row.witness_exponent = rep.witness_exponent;
    row.failure = rep.counterexample();
}

// Spiky draws reach the theorem's hypotheses far more often than plain uniform
// noise, which almost never has a nonnegative derivative everywhere.
GridFunction thm1_candidate(int n0, const QParams& params, std::uint64_t seed, int sample) {
    if (sample % 2 == 0) return oracle::generate_thm1_instance(n0, 0, params, seed);
    return oracle::sample_random_grid_function({0, n0}, oracle::Distribution::Spiky, seed);
}

SweepRow run_one(SweepTheorem t, const QParams& params, int window, int sample, std::uint64_t seed,
                 const SweepConfig& cfg) {
    const int n0 = window - 1;
    const QPowerConfig qcfg;
    const SignTolerance tol{cfg.sign_tol};
    SweepRow row = base_row(t, params.q(), params.alpha(), n0, window, seed);

    switch (t) {
    case SweepTheorem::Thm1: {
        GridFunction y = thm1_candidate(n0, params, seed, sample);
        row.replay["y"] = to_json(y);
        fill_from_report(row, verify_thm1(y, n0, params, qcfg, tol));
        break;
    }
    case SweepTheorem::Converse:
    case SweepTheorem::Strict: {
        GridFunction y = oracle::sample_random_grid_function({0, n0}, oracle::Distribution::Increasing, seed);
        row.replay["y"] = to_json(y);
        fill_from_report(row, verify_converse(y, n0, params, t == SweepTheorem::Strict, qcfg, tol));
        break;
    }
    case SweepTheorem::Decreasing1: {
        GridFunction y = thm1_candidate(n0, params, seed, sample).negated();
        row.replay["y"] = to_json(y);
        fill_from_report(row, verify_decreasing(y, n0, params, DecreasingDirection::FromDerivative, qcfg, tol));
        break;
    }
    case SweepTheorem::Decreasing2: {
        GridFunction y = oracle::sample_random_grid_function({0, n0}, oracle::Distribution::Decreasing, seed);
        row.replay["y"] = to_json(y);
        fill_from_report(row, verify_decreasing(y, n0, params, DecreasingDirection::FromMonotone, qcfg, tol));
        break;
    }
    case SweepTheorem::Corollary: {
        SplitMix64 rng(derive_seed(seed, {1}));
        const GridFunction y =
            sample % 2 == 0
                ? oracle::generate_thm1_instance(n0, 0, params, seed).extended(rng.uniform(-1.0, 1.0))
                : oracle::sample_random_grid_function({0, n0 + 1}, oracle::Distribution::Spiky, seed);
        row.replay["y"] = to_json(y);
        const MonotonicityReport rep = verify_corollary(y, n0, params, qcfg, tol);
        fill_from_report(row, rep);
        row.residual = rep.consistency_residual;
        if (rep.consistency_residual && *rep.consistency_residual > cfg.residual_tol) row.failure = true;
        if (rep.hypotheses_agree && !*rep.hypotheses_agree) row.failure = true;
        break;
    }
    case SweepTheorem::Tool: {
        GridFunction f = oracle::sample_random_grid_function({0, n0}, oracle::Distribution::Uniform, seed);
        row.replay["f"] = to_json(f);
        double worst = 0.0;
        int worst_b = 0;
        for (int n_b = 0; n_b < n0; ++n_b) {
            const double r = composition_residual(f, n0, n_b, params, qcfg);
            if (r > worst) {
                worst = r;
                worst_b = n_b;
            }
        }
        row.hypotheses_hold = true;
        row.conclusion_holds = worst <= cfg.residual_tol;
        row.worst_margin = cfg.residual_tol - worst;
        row.witness_exponent = worst_b;
        row.residual = worst;
        row.failure = !row.conclusion_holds;
        break;
    }
    case SweepTheorem::Mvt: {
        GridFunction f = oracle::sample_random_grid_function({0, n0}, oracle::Distribution::Uniform, seed);
        GridFunction g = oracle::sample_random_grid_function({0, n0}, oracle::Distribution::Increasing,
                                                             derive_seed(seed, {1}));
        const int n_b = sample % n0;
        row.replay["f"] = to_json(f);
        row.replay["g"] = to_json(g);
        row.replay["n_b"] = n_b;
        row.n_b = n_b;
        const MvtWitnesses w = mvt_witnesses(f, g, n0, n_b, params, qcfg);
        row.hypotheses_hold = true;
        row.conclusion_holds = w.sandwich_holds();
        row.worst_margin = w.sandwich_margin();
        row.witness_exponent = w.quotient >= 0.0 ? w.r2_exponent : w.r1_exponent;
        row.min_ratio = w.min_ratio;
        row.quotient = w.quotient;
        row.max_ratio = w.max_ratio;
        row.failure = !row.conclusion_holds;
        break;
    }
    }
    return row;
}

}  // namespace

std::string_view cli_name(SweepTheorem t) { return info(t).cli; }

SweepTheorem parse_sweep_theorem(std::string_view name) {
    for (const auto& i : kTheorems) {
        if (i.cli == name || i.report == name) return i.id;
    }
    throw ConfigError("theorem: unknown name '" + std::string(name) + "'");
}

std::vector<SweepTheorem> all_sweep_theorems() {
    std::vector<SweepTheorem> out;
    for (const auto& i : kTheorems) out.push_back(i.id);
    return out;
}

void SweepConfig::validate() const {
    if (q_values.empty()) throw ConfigError("q_values: must not be empty");
    for (std::size_t k = 0; k < q_values.size(); ++k) {
        if (!(q_values[k] > 0.0 && q_values[k] < 1.0)) {
            throw ConfigError("q_values[" + std::to_string(k) + "]: must lie in (0, 1)");
        }
    }
    if (alpha_values.empty()) throw ConfigError("alpha_values: must not be empty");
    for (std::size_t k = 0; k < alpha_values.size(); ++k) {
        if (!(alpha_values[k] > 0.0 && alpha_values[k] <= 1.0)) {
            throw ConfigError("alpha_values[" + std::to_string(k) + "]: must lie in (0, 1]");
        }
    }
    if (window_sizes.empty()) throw ConfigError("window_sizes: must not be empty");
    for (std::size_t k = 0; k < window_sizes.size(); ++k) {
        if (window_sizes[k] < 2 || window_sizes[k] > 4096) {
            throw ConfigError("window_sizes[" + std::to_string(k) + "]: must lie in [2, 4096]");
        }
    }
    if (samples_per_cell < 1) throw ConfigError("samples_per_cell: must be at least 1");
    if (!(sign_tol > 0.0 && sign_tol < 1e-3)) throw ConfigError("tolerance.sign: must lie in (0, 1e-3)");
    if (!(residual_tol > 0.0 && residual_tol < 1e-3)) {
        throw ConfigError("tolerance.residual: must lie in (0, 1e-3)");
    }
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    SweepConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "q_values") {
            c.q_values = read_list<double>(value, "q_values");
        } else if (key == "alpha_values") {
            c.alpha_values = read_list<double>(value, "alpha_values");
        } else if (key == "window_sizes") {
            c.window_sizes = read_list<int>(value, "window_sizes");
        } else if (key == "samples_per_cell") {
            if (!value.is_number_integer()) throw ConfigError("samples_per_cell: expected an integer");
            c.samples_per_cell = value.get<int>();
        } else if (key == "seed") {
            if (!value.is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
            c.seed = value.get<std::uint64_t>();
        } else if (key == "tolerance") {
            if (!value.is_object()) throw ConfigError("tolerance: expected an object");
            for (const auto& [tk, tv] : value.items()) {
                if (tk == "sign") {
                    c.sign_tol = read_number(tv, "tolerance.sign");
                } else if (tk == "residual") {
                    c.residual_tol = read_number(tv, "tolerance.residual");
                } else {
                    throw ConfigError("tolerance." + tk + ": unknown field");
                }
            }
        } else {
            throw ConfigError(key + ": unknown field");
        }
    }
    c.validate();
    return c;
}

nlohmann::json SweepConfig::to_json() const {
    return {{"q_values", q_values},
            {"alpha_values", alpha_values},
            {"window_sizes", window_sizes},
            {"samples_per_cell", samples_per_cell},
            {"seed", seed},
            {"tolerance", {{"sign", sign_tol}, {"residual", residual_tol}}}};
}

int SweepResult::failures() const {
    int n = 0;
    for (const auto& [_, s] : summary) n += s.failures;
    return n;
}

nlohmann::json SweepResult::summary_json(const SweepConfig& cfg) const {
    nlohmann::json by = nlohmann::json::object();
    for (const auto& [name, s] : summary) {
        by[name] = {{"samples", s.samples},
                    {"non_vacuous", s.non_vacuous},
                    {"failures", s.failures},
                    {"worst_conclusion_margin", json_number(s.worst_conclusion_margin)},
                    {"max_residual", s.max_residual}};
    }
    return {{"rows", rows.size()}, {"failures", failures()}, {"by_theorem", by}, {"config", cfg.to_json()}};
}

SweepResult run_sweep(const SweepConfig& cfg, const std::vector<SweepTheorem>& theorems) {
    cfg.validate();
    SweepResult result;
    for (SweepTheorem t : theorems) {
        const auto ti = static_cast<std::uint64_t>(t);
        TheoremSummary& sum = result.summary[std::string(info(t).report)];
        for (std::size_t qi = 0; qi < cfg.q_values.size(); ++qi) {
            for (std::size_t ai = 0; ai < cfg.alpha_values.size(); ++ai) {
                const double alpha = cfg.alpha_values[ai];
                if ((t == SweepTheorem::Tool || t == SweepTheorem::Mvt) && alpha >= 1.0) continue;
                const QParams params(cfg.q_values[qi], alpha);
                for (int window : cfg.window_sizes) {
                    for (int k = 0; k < cfg.samples_per_cell; ++k) {
                        const std::uint64_t seed =
                            derive_seed(cfg.seed, {ti, qi, ai, static_cast<std::uint64_t>(window),
                                                   static_cast<std::uint64_t>(k)});
                        SweepRow row = run_one(t, params, window, k, seed, cfg);
                        ++sum.samples;
                        if (row.hypotheses_hold) {
                            ++sum.non_vacuous;
                            sum.worst_conclusion_margin = std::min(sum.worst_conclusion_margin, row.worst_margin);
                        }
                        if (row.failure) ++sum.failures;
                        if (row.residual) sum.max_residual = std::max(sum.max_residual, *row.residual);
                        result.rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    return result;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "theorem_id,q,alpha,n0,window,seed,hypotheses_hold,conclusion_holds,worst_margin,"
           "witness_exponent,residual,n_b,min_ratio,quotient,max_ratio\n";
    for (const auto& r : rows) {
        out << r.theorem_id << ',' << format_double(r.q) << ',' << format_double(r.alpha) << ',' << r.n0 << ','
            << r.window << ',' << r.seed << ',' << (r.hypotheses_hold ? "true" : "false") << ','
            << (r.conclusion_holds ? "true" : "false") << ',' << format_double(r.worst_margin) << ','
            << opt_int(r.witness_exponent) << ',' << opt_double(r.residual) << ',' << opt_int(r.n_b) << ','
            << opt_double(r.min_ratio) << ',' << opt_double(r.quotient) << ',' << opt_double(r.max_ratio)
            << '\n';
    }
    return out.str();
}

void write_reports(const SweepResult& result, const SweepConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "report.csv", std::ios::binary);
        csv << to_csv(result.rows);
    }
    {
        std::ofstream js(dir / "summary.json", std::ios::binary);
        js << result.summary_json(cfg).dump(2) << '\n';
    }
    int k = 0;
    for (const auto& row : result.rows) {
        if (!row.failure) continue;
        nlohmann::json j = row.replay;
        j["worst_margin"] = json_number(row.worst_margin);
        if (row.witness_exponent) j["witness_exponent"] = *row.witness_exponent;
        if (row.residual) j["residual"] = *row.residual;
        std::ofstream out(dir / ("counterexample_" + std::to_string(k++) + ".json"), std::ios::binary);
        out << j.dump(2) << '\n';
    }
}

nlohmann::json to_json(const GridFunction& f) { return {{"n_lo", f.n_lo()}, {"values", std::vector<double>(f.values().begin(), f.values().end())}}; }

GridFunction grid_function_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n_lo") || !j.contains("values")) {
        throw ConfigError("function: expected {\"n_lo\": int, \"values\": [...]}");
    }
    if (!j["n_lo"].is_number_integer()) throw ConfigError("function.n_lo: expected an integer");
    return GridFunction(j["n_lo"].get<int>(), read_list<double>(j["values"], "function.values"));
}

}  // namespace qmono
