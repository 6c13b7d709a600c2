#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmono/core.hpp"
#include "qmono/errors.hpp"
#include "qmono/frac.hpp"
#include "qmono/grid.hpp"
#include "qmono/monotone.hpp"
#include "qmono/mvt.hpp"
#include "qmono/oracle.hpp"
#include "qmono/sweep.hpp"

namespace {

using nlohmann::json;
using namespace qmono;

constexpr int kVerified = 0;
constexpr int kCounterexample = 1;
constexpr int kUsage = 2;
constexpr int kDomain = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw UsageError("--f: bad value '" + item + "'");
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

int parse_int(const std::string& text, const char* what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size()) throw UsageError(std::string(what) + ": bad integer '" + text + "'");
    return v;
}

// tabulated:N_LO:V0,V1,...  const:C  identity  qpower:N:MU  or a JSON file path.
FunctionExpr parse_function(const std::string& spec) {
    if (spec.rfind("tabulated:", 0) == 0) {
        const std::string rest = spec.substr(10);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos) throw UsageError("--f: expected tabulated:n_lo:v0,v1,...");
        return expr::Tabulated{parse_int(rest.substr(0, colon), "--f n_lo"), parse_values(rest.substr(colon + 1))};
    }
    if (spec.rfind("const:", 0) == 0) return expr::Constant{parse_values(spec.substr(6)).at(0)};
    if (spec == "identity") return expr::Identity{};
    if (spec.rfind("qpower:", 0) == 0) {
        const std::string rest = spec.substr(7);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos) throw UsageError("--f: expected qpower:n:mu");
        const auto mu = parse_values(rest.substr(colon + 1));
        if (mu.size() != 1) throw UsageError("--f: expected a single exponent in qpower:n:mu");
        return expr::QPower{parse_int(rest.substr(0, colon), "--f n"), mu[0]};
    }
    std::ifstream in(spec);
    if (!in) throw UsageError("--f: unknown function spec or unreadable file '" + spec + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("--f: " + spec + ": " + e.what());
    }
    GridFunction g = grid_function_from_json(j);
    return expr::Tabulated{g.n_lo(), {g.values().begin(), g.values().end()}};
}

GridFunction to_grid(const FunctionExpr& f, ExponentRange window, const QParams& params) {
    if (const auto* t = std::get_if<expr::Tabulated>(&f)) {
        if (t->values.empty()) throw UsageError("--f: no values");
        return GridFunction(t->n_lo, t->values);
    }
    return sample(f, window, params);
}

struct EvalArgs {
    std::string op;
    std::optional<double> q, alpha, x, t, s, mu;
    std::optional<int> n0, t_exp, n, n_b;
    std::optional<std::string> f;
    bool verify = false;
    double tol = 1e-11;
};

template <class T>
T need(const std::optional<T>& v, const char* flag, const std::string& op) {
    if (!v) throw UsageError("--op " + op + " needs " + flag);
    return *v;
}

int cmd_eval(const EvalArgs& a) {
    const std::string& op = a.op;
    json out;
    std::optional<double> reference;
    auto params = [&] { return QParams(need(a.q, "--q", op), a.alpha.value_or(1.0)); };
    auto grid = [&](ExponentRange window) {
        return to_grid(parse_function(need(a.f, "--f", op)), window, params());
    };

    if (op == "cq") {
        out["value"] = c_q(need(a.alpha, "--alpha", op), need(a.q, "--q", op));
    } else if (op == "qbracket") {
        out["value"] = q_bracket(need(a.x, "--x", op), need(a.q, "--q", op));
    } else if (op == "point") {
        out["value"] = point_value(need(a.n, "--n", op), need(a.q, "--q", op));
    } else if (op == "qgamma") {
        const double x = need(a.x, "--x", op), q = need(a.q, "--q", op);
        const OperatorResult r = q_gamma(x, q);
        out["value"] = r.value;
        out["err_bound"] = r.trunc_error_bound;
        if (a.verify) reference = oracle::q_gamma(x, q);
    } else if (op == "qpow") {
        const double t = need(a.t, "--t", op), s = need(a.s, "--s", op), mu = need(a.mu, "--mu", op);
        const double q = need(a.q, "--q", op);
        const OperatorResult r = q_pow_frac(t, s, mu, q);
        out["value"] = r.value;
        out["err_bound"] = r.trunc_error_bound;
        if (a.verify) reference = oracle::q_pow_frac(t, s, mu, q);
    } else if (op == "qpow-int") {
        out["value"] = q_pow_int(need(a.t, "--t", op), need(a.s, "--s", op), need(a.n, "--n", op),
                                 need(a.q, "--q", op));
    } else if (op == "nabla-deriv") {
        const int nt = need(a.t_exp, "--t-exp", op);
        out["value"] = nabla_q_derivative(grid({nt, nt + 1}), nt, params());
    } else if (op == "nabla-int") {
        const int nt = need(a.t_exp, "--t-exp", op), n0 = need(a.n0, "--n0", op);
        const GridFunction f = grid({std::min(nt, n0), std::max(nt, n0)});
        out["value"] = nabla_q_integral(f, n0, nt, params());
        if (a.verify) reference = oracle::nabla_q_integral(f, n0, nt, params());
    } else if (op == "nabla-int0") {
        const FunctionExpr f = parse_function(need(a.f, "--f", op));
        const OperatorResult r = nabla_q_integral_from_zero(f, need(a.t_exp, "--t-exp", op), params());
        out["value"] = r.value;
        out["err_bound"] = r.trunc_error_bound;
    } else if (op == "frac-int") {
        const int nt = need(a.t_exp, "--t-exp", op), n0 = need(a.n0, "--n0", op);
        need(a.alpha, "--alpha", op);
        const GridFunction f = grid({nt, std::max(nt, n0)});
        out["value"] = q_frac_integral(f, n0, nt, params());
        if (a.verify) reference = oracle::frac_integral(f, n0, nt, params());
    } else if (op == "rl-deriv") {
        const int nt = need(a.t_exp, "--t-exp", op), n0 = need(a.n0, "--n0", op);
        need(a.alpha, "--alpha", op);
        const GridFunction f = grid({nt, std::max(nt + 1, n0)});
        out["value"] = rl_q_derivative(f, n0, nt, params());
        if (a.verify) reference = oracle::rl_derivative(f, n0, nt, params());
    } else if (op == "caputo") {
        const int nt = need(a.t_exp, "--t-exp", op), n0 = need(a.n0, "--n0", op);
        need(a.alpha, "--alpha", op);
        const int k = static_cast<int>(std::floor(*a.alpha)) + 1;
        const GridFunction f = grid({nt, std::max(nt, n0 - 1 + k)});
        out["value"] = caputo_q_derivative(f, n0, nt, params());
    } else if (op == "mq") {
        const int n0 = need(a.n0, "--n0", op), nb = need(a.n_b, "--n-b", op);
        need(a.alpha, "--alpha", op);
        out["value"] = m_q(n0, nb, params());
        if (a.verify) reference = oracle::composition_constant(n0, nb, params());
    } else {
        throw UsageError("--op: unknown operator '" + op + "'");
    }

    int code = kVerified;
    if (a.verify) {
        if (!reference) throw UsageError("--verify is not available for --op " + op);
        const double v = out["value"].get<double>();
        const double diff = std::abs(v - *reference) / std::max(std::abs(*reference), 1e-300);
        out["oracle"] = *reference;
        out["oracle_rel_diff"] = diff;
        out["oracle_agrees"] = diff < a.tol;
        if (diff >= a.tol) code = kCounterexample;
    }
    std::cout << out.dump() << '\n';
    return code;
}

struct VerifyArgs {
    std::vector<std::string> theorems{"all"};
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::string out = "qmono-report";
    std::optional<double> tol;
};

int cmd_verify(const VerifyArgs& a) {
    SweepConfig cfg;
    if (a.config) {
        std::ifstream in(*a.config);
        if (!in) throw ConfigError("--config: cannot read '" + *a.config + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("--config: " + *a.config + ": " + e.what());
        }
        cfg = SweepConfig::from_json(j);
    }
    if (!a.seed && !(a.config && cfg.seed != SweepConfig{}.seed)) {
        if (const char* env = std::getenv("QFRAC_SEED")) {
            try {
                cfg.seed = std::stoull(env);
            } catch (const std::exception&) {
                throw ConfigError("QFRAC_SEED: expected a nonnegative integer");
            }
        }
    }
    if (a.seed) cfg.seed = *a.seed;
    if (a.samples) cfg.samples_per_cell = *a.samples;
    if (a.tol) cfg.sign_tol = *a.tol;
    cfg.validate();

    std::vector<SweepTheorem> theorems;
    for (const auto& name : a.theorems) {
        if (name == "all") {
            for (SweepTheorem t : all_sweep_theorems()) theorems.push_back(t);
        } else {
            theorems.push_back(parse_sweep_theorem(name));
        }
    }

    const SweepResult result = run_sweep(cfg, theorems);
    write_reports(result, cfg, a.out);
    std::cout << result.summary_json(cfg)["by_theorem"].dump(2) << '\n';
    if (result.failures() > 0) {
        std::cerr << "verify: " << result.failures() << " failing sample(s); see " << a.out << '\n';
        return kCounterexample;
    }
    return kVerified;
}

struct TableArgs {
    std::string fn;
    std::vector<double> q{0.5};
    double alpha_from = 0.0;
    double alpha_to = 1.0;
    int steps = 10;
    std::vector<int> n_a{5};
    std::vector<int> n_b{0};
};

int cmd_table(TableArgs a) {
    if (a.steps < 1) throw UsageError("--steps: must be at least 1");
    if (!(a.alpha_from < a.alpha_to)) throw UsageError("--alpha-from must be below --alpha-to");
    if (a.q.empty()) throw UsageError("--q: empty list");
    std::sort(a.q.begin(), a.q.end());
    std::sort(a.n_a.begin(), a.n_a.end());
    std::sort(a.n_b.begin(), a.n_b.end());
    for (double q : a.q) {
        if (!(q > 0.0 && q < 1.0)) throw UsageError("--q: " + format_double(q) + " is outside (0, 1)");
    }
    std::vector<double> alphas;
    for (int k = 0; k <= a.steps; ++k) {
        alphas.push_back(k == a.steps ? a.alpha_to
                                      : a.alpha_from + (a.alpha_to - a.alpha_from) * k / a.steps);
    }

    std::string body;
    if (a.fn == "cq") {
        if (a.alpha_from < 0.0) throw UsageError("--alpha-from: must be nonnegative");
        body = "q,alpha,value\n";
        for (double q : a.q) {
            for (double alpha : alphas) {
                body += format_double(q) + ',' + format_double(alpha) + ',' + format_double(c_q(alpha, q)) + '\n';
            }
        }
    } else if (a.fn == "mq") {
        if (!(a.alpha_from > 0.0 && a.alpha_to < 1.0)) throw UsageError("--fn mq: alpha range must lie in (0, 1)");
        for (int na : a.n_a) {
            for (int nb : a.n_b) {
                if (nb >= na) {
                    throw UsageError("--n-b " + std::to_string(nb) + " must be below --n-a " + std::to_string(na));
                }
            }
        }
        body = "q,alpha,n_a,n_b,value\n";
        for (double q : a.q) {
            for (double alpha : alphas) {
                for (int na : a.n_a) {
                    for (int nb : a.n_b) {
                        body += format_double(q) + ',' + format_double(alpha) + ',' + std::to_string(na) + ',' +
                                std::to_string(nb) + ',' + format_double(m_q(na, nb, QParams(q, alpha))) + '\n';
                    }
                }
            }
        }
    } else {
        throw UsageError("--fn: expected cq or mq");
    }
    std::cout << body;
    return kVerified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-fractional operators on the time scale T_q and monotonicity checks"};
    app.require_subcommand(1);

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Evaluate one operator and print it as JSON");
    eval->add_option("--op", ev.op,
                     "cq, qbracket, point, qgamma, qpow, qpow-int, nabla-deriv, nabla-int, nabla-int0, "
                     "frac-int, rl-deriv, caputo, mq")
        ->required();
    eval->add_option("--q", ev.q, "Grid ratio in (0, 1)");
    eval->add_option("--alpha", ev.alpha, "Fractional order");
    eval->add_option("--x", ev.x, "Argument of qgamma / qbracket");
    eval->add_option("--t", ev.t, "First argument of qpow / qpow-int");
    eval->add_option("--s", ev.s, "Second argument of qpow / qpow-int");
    eval->add_option("--mu", ev.mu, "Exponent of qpow");
    eval->add_option("--n", ev.n, "Integer exponent (point, qpow-int)");
    eval->add_option("--n0", ev.n0, "Anchor exponent: lower limit for integrals and Caputo, a for rl-deriv and mq");
    eval->add_option("--t-exp", ev.t_exp, "Exponent of the evaluation point t = q^n");
    eval->add_option("--n-b", ev.n_b, "Exponent of b for mq");
    eval->add_option("--f", ev.f, "tabulated:n_lo:v0,v1,..., const:c, identity, qpower:n:mu, or a JSON file");
    eval->add_flag("--verify", ev.verify, "Cross-check against the reference implementation");
    eval->add_option("--tol", ev.tol, "Relative agreement required by --verify");

    VerifyArgs vf;
    auto* verify = app.add_subcommand("verify", "Run randomized theorem checks and write reports");
    verify->add_option("--theorem", vf.theorems, "all, thm1, converse, strict, dec1, dec2, corollary, tool, mvt");
    verify->add_option("--config", vf.config, "Sweep configuration JSON");
    verify->add_option("--seed", vf.seed, "Base seed (default 42, or QFRAC_SEED)");
    verify->add_option("--samples", vf.samples, "Samples per cell");
    verify->add_option("--out", vf.out, "Report directory")->capture_default_str();
    verify->add_option("--tol", vf.tol, "Relative sign tolerance");

    TableArgs tb;
    auto* table = app.add_subcommand("table", "Tabulate c_q or M_q as CSV");
    table->add_option("--fn", tb.fn, "cq or mq")->required();
    table->add_option("--q", tb.q, "One or more q values")->capture_default_str();
    table->add_option("--alpha-from", tb.alpha_from)->capture_default_str();
    table->add_option("--alpha-to", tb.alpha_to)->capture_default_str();
    table->add_option("--steps", tb.steps, "Number of intervals; steps + 1 rows per q")->capture_default_str();
    table->add_option("--n-a", tb.n_a, "Exponents of a (mq)")->capture_default_str();
    table->add_option("--n-b", tb.n_b, "Exponents of b (mq)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (*eval) return cmd_eval(ev);
        if (*verify) return cmd_verify(vf);
        return cmd_table(tb);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const qmono::Error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomain;
    }
}
