#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmono/core.hpp"
#include "qmono/errors.hpp"
#include "qmono/frac.hpp"
#include "qmono/monotone.hpp"
#include "qmono/mvt.hpp"
#include "qmono/oracle.hpp"
#include "qmono/random.hpp"

using namespace qmono;
namespace o = qmono::oracle;

namespace {

constexpr double kQs[] = {0.3, 0.5, 0.9};

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Worst value seen plus a count of failed checks.
struct Tally {
    double worst = 0.0;
    long checks = 0;
    long failures = 0;

    void residual(double r, double tol) {
        ++checks;
        worst = std::max(worst, r);
        if (!(r < tol)) ++failures;
    }
    void require(bool ok) {
        ++checks;
        if (!ok) ++failures;
    }
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

GridFunction uniform(ExponentRange w, std::uint64_t seed) {
    return o::sample_random_grid_function(w, o::Distribution::Uniform, seed);
}

Outcome basic_calculus() {
    Tally fund, back, prod, props;
    std::uint64_t seed = 1;
    for (double q : kQs) {
        const QParams p(q);
        for (int k = 0; k < 50; ++k) {
            // 8 points: exponents 0..7, a = q^7
            GridFunction f = uniform({0, 7}, seed++);
            GridFunction g = uniform({0, 7}, seed++);
            const double scale = f.max_abs();
            for (int n = 0; n < 7; ++n) {
                const double d = (nabla_q_integral(f, 7, n, p) - nabla_q_integral(f, 7, n + 1, p)) /
                                 ((1 - q) * point_value(n, q));
                fund.residual(relative_residual(d, f(n), scale), 1e-12);
            }
            GridFunction df = nabla_q_derivative_grid(f, 1, p);
            for (int n = 0; n < 7; ++n) {
                back.residual(relative_residual(nabla_q_integral(df, 7, n, p), f(n) - f(7), scale), 1e-12);
            }
            for (int n = 0; n < 7; ++n) {
                const double lhs = (f(n) * g(n) - f(n + 1) * g(n + 1)) / ((1 - q) * point_value(n, q));
                const double t1 = f(n + 1) * nabla_q_derivative(g, n, p);
                const double t2 = nabla_q_derivative(f, n, p) * g(n);
                prod.residual(relative_residual(lhs, t1 + t2, std::max(std::abs(t1), std::abs(t2))), 1e-12);
            }
        }
        for (int nt = -2; nt <= 3; ++nt) {
            for (int m = 1; m <= 6; ++m) {
                const double t = point_value(nt, q), s = point_value(nt + m, q);
                for (double b : {0.25, 0.5, 1.0}) {
                    for (double c : {0.25, 0.5, 1.0}) props.residual(power_addition_residual(t, s, b, c, q), 1e-12);
                    for (double kk : {q * q, 1.0 / q}) props.residual(power_scaling_residual(t, s, b, kk, q), 1e-12);
                    props.residual(power_nabla_t_residual(t, s, b, q), 1e-12);
                    props.residual(power_nabla_s_residual(t, s, b, q), 1e-12);
                }
            }
        }
    }
    Outcome out;
    out.pass = fund.failures + back.failures + prod.failures + props.failures == 0;
    out.detail = "fundamental " + fmt(fund.worst) + ", integral of derivative " + fmt(back.worst) + ", product rule " +
                 fmt(prod.worst) + ", q-factorial properties " + fmt(props.worst) + " over " +
                 std::to_string(fund.checks + back.checks + prod.checks + props.checks) + " checks";
    return out;
}

Outcome recurrences() {
    Tally t;
    for (double q : kQs) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            for (int i = 1; i <= 10; ++i) t.residual(recurrence_residual(Recurrence::R1, 0, 0, i, alpha, q), 1e-12);
            for (int n = -5; n <= -2; ++n) t.residual(recurrence_residual(Recurrence::R2, 0, n, 0, alpha, q), 1e-12);
            for (int m = -5; m <= 10; ++m) {
                for (int n = m + 1; n <= 10; ++n) {
                    t.residual(recurrence_residual(Recurrence::R3, m, n, 0, alpha, q), 1e-12);
                    if (m < n - 1) t.residual(recurrence_residual(Recurrence::R4, m, n, 0, alpha, q), 1e-12);
                }
            }
        }
    }
    return {t.failures == 0, "worst residual " + fmt(t.worst) + " over " + std::to_string(t.checks) + " recurrences"};
}

Outcome power_rule() {
    Tally t;
    const std::pair<int, int> anchors[] = {{4, 1}, {6, 0}, {8, 5}};
    for (double q : kQs) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            for (double mu : {0.0, 0.5, 1.0, 2.0}) {
                for (auto [ns, nx] : anchors) t.residual(power_rule_check(mu, ns, nx, QParams(q, alpha)), 1e-9);
            }
        }
    }
    return {t.failures == 0, "worst residual " + fmt(t.worst) + " over " + std::to_string(t.checks) + " cells"};
}

Outcome caputo_composition() {
    Tally t;
    std::uint64_t seed = 1000;
    for (double q : kQs) {
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            for (int k = 0; k < 20; ++k) {
                GridFunction f = uniform({0, 8}, seed++);
                for (int n = 0; n < 8; ++n) t.residual(integral_of_caputo_residual(f, 8, n, QParams(q, alpha)), 1e-9);
            }
        }
    }
    return {t.failures == 0, "worst residual " + fmt(t.worst) + " over " + std::to_string(t.checks) + " points"};
}

Outcome caputo_rl() {
    Tally t;
    std::uint64_t seed = 1000;
    for (double q : kQs) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            for (int k = 0; k < 20; ++k) {
                GridFunction f = uniform({0, 8}, seed++);
                for (int n = 0; n < 8; ++n) t.residual(caputo_rl_relation_residual(f, 8, n, QParams(q, alpha)), 1e-10);
            }
        }
    }
    return {t.failures == 0, "worst residual " + fmt(t.worst) + " over " + std::to_string(t.checks) + " points"};
}

Outcome theorem1() {
    Outcome out;
    int built = 0, built_ok = 0;
    std::uint64_t seed = 1;
    const double alphas[] = {0.25, 0.5, 0.75, 1.0};
    for (double q : kQs) {
        for (double alpha : alphas) {
            const QParams p(q, alpha);
            for (int k = 0; k < 17; ++k) {
                const int n0 = 2 + k % 7;
                GridFunction y = o::generate_thm1_instance(n0, 0, p, seed++);
                MonotonicityReport r = verify_thm1(y, n0, p);
                ++built;
                if (r.hypotheses_hold && r.conclusion_holds) ++built_ok;
            }
        }
    }
    long counterexamples = 0;
    int min_hits = 1 << 30;
    double worst = INFINITY;
    for (std::size_t qi = 0; qi < 3; ++qi) {
        for (std::size_t ai = 0; ai < 4; ++ai) {
            const QParams p(kQs[qi], alphas[ai]);
            int hits = 0;
            for (int k = 0; k < 10000; ++k) {
                const int n0 = 3 + k % 6;
                GridFunction y = o::sample_random_grid_function({0, n0}, o::Distribution::Spiky,
                                                                derive_seed(6, {qi, ai, std::uint64_t(k)}));
                MonotonicityReport r = verify_thm1(y, n0, p);
                if (!r.hypotheses_hold) continue;
                ++hits;
                worst = std::min(worst, r.conclusion_margin);
                if (!r.conclusion_holds) ++counterexamples;
            }
            min_hits = std::min(min_hits, hits);
        }
    }
    out.pass = built >= 200 && built_ok == built && counterexamples == 0 && min_hits >= 100;
    out.detail = std::to_string(built_ok) + "/" + std::to_string(built) + " constructed instances pass; sampling: " +
                 std::to_string(counterexamples) + " counterexamples, fewest non-vacuous hits in a cell " +
                 std::to_string(min_hits) + ", worst conclusion slack " + fmt(worst);
    return out;
}

// Weakly increasing: a third of the increments are zero.
GridFunction weakly_increasing(int n0, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n0 + 1));
    double x = rng.uniform01() < 0.2 ? 0.0 : rng.uniform_pos();
    for (int n = n0; n >= 0; --n) {
        v[static_cast<std::size_t>(n)] = x;
        x += rng.uniform01() < 1.0 / 3.0 ? 0.0 : rng.uniform_pos();
    }
    return GridFunction(0, std::move(v));
}

Outcome converse() {
    long cx = 0, weak_hits = 0, strict_hits = 0, strict_below_tau = 0;
    double worst_strict = INFINITY;
    for (std::size_t qi = 0; qi < 3; ++qi) {
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const QParams p(kQs[qi], alpha);
            for (int k = 0; k < 1000; ++k) {
                const int n0 = 2 + k % 7;
                const std::uint64_t s = derive_seed(7, {qi, std::uint64_t(alpha * 100), std::uint64_t(k)});
                GridFunction inc = o::sample_random_grid_function({0, n0}, o::Distribution::Increasing, s);
                MonotonicityReport rs = verify_converse(inc, n0, p, true);
                if (rs.hypotheses_hold) {
                    ++strict_hits;
                    worst_strict = std::min(worst_strict, rs.conclusion_margin);
                    if (!rs.conclusion_holds) ++strict_below_tau;
                }
                MonotonicityReport rw = verify_converse(weakly_increasing(n0, s), n0, p, false);
                if (rw.hypotheses_hold) {
                    ++weak_hits;
                    if (!rw.conclusion_holds) ++cx;
                }
            }
        }
    }
    return {cx == 0 && strict_below_tau == 0 && strict_hits > 0 && weak_hits > 0,
            std::to_string(weak_hits) + " weak and " + std::to_string(strict_hits) +
                " strict non-vacuous samples; counterexamples " + std::to_string(cx + strict_below_tau) +
                "; smallest strict derivative margin " + fmt(worst_strict)};
}

Outcome decreasing() {
    long cx = 0, hits1 = 0, hits2 = 0, duality_breaks = 0;
    for (std::size_t qi = 0; qi < 3; ++qi) {
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const QParams p(kQs[qi], alpha);
            for (int k = 0; k < 1000; ++k) {
                const int n0 = 2 + k % 7;
                const std::uint64_t s = derive_seed(8, {qi, std::uint64_t(alpha * 100), std::uint64_t(k)});
                GridFunction y = k % 2 == 0 ? o::generate_thm1_instance(n0, 0, p, s)
                                            : o::sample_random_grid_function({0, n0}, o::Distribution::Spiky, s);
                MonotonicityReport up = verify_thm1(y, n0, p);
                MonotonicityReport down = verify_decreasing(y.negated(), n0, p, DecreasingDirection::FromDerivative);
                if (up.hypotheses_hold != down.hypotheses_hold || up.conclusion_holds != down.conclusion_holds) {
                    ++duality_breaks;
                }
                if (down.hypotheses_hold) ++hits1;
                if (down.counterexample()) ++cx;

                GridFunction d = o::sample_random_grid_function({0, n0}, o::Distribution::Decreasing, s);
                MonotonicityReport r2 = verify_decreasing(d, n0, p, DecreasingDirection::FromMonotone);
                if (r2.hypotheses_hold) ++hits2;
                if (r2.counterexample()) ++cx;
                GridFunction w = weakly_increasing(n0, s).negated();
                MonotonicityReport r3 = verify_decreasing(w, n0, p, DecreasingDirection::FromMonotone);
                if (r3.counterexample()) ++cx;
            }
        }
    }
    return {cx == 0 && duality_breaks == 0 && hits1 > 0 && hits2 > 0,
            std::to_string(hits1) + " + " + std::to_string(hits2) + " non-vacuous samples, counterexamples " +
                std::to_string(cx) + ", duality mismatches " + std::to_string(duality_breaks)};
}

Outcome corollary() {
    long cx = 0, hits = 0, samples = 0, disagree = 0;
    double worst_res = 0.0;
    for (std::size_t qi = 0; qi < 3; ++qi) {
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const QParams p(kQs[qi], alpha);
            for (int k = 0; k < 500; ++k) {
                const int n0 = 2 + k % 7;
                const std::uint64_t s = derive_seed(9, {qi, std::uint64_t(alpha * 100), std::uint64_t(k)});
                SplitMix64 rng(derive_seed(s, {1}));
                GridFunction y = k % 2 == 0
                                     ? o::generate_thm1_instance(n0, 0, p, s).extended(rng.uniform(-1.0, 1.0))
                                     : o::sample_random_grid_function({0, n0 + 1}, o::Distribution::Spiky, s);
                MonotonicityReport r = verify_corollary(y, n0, p);
                ++samples;
                if (r.hypotheses_hold) ++hits;
                if (r.counterexample()) ++cx;
                if (r.hypotheses_agree && !*r.hypotheses_agree) ++disagree;
                if (r.consistency_residual) worst_res = std::max(worst_res, *r.consistency_residual);
            }
        }
    }
    return {cx == 0 && disagree == 0 && worst_res < 1e-9,
            std::to_string(hits) + "/" + std::to_string(samples) + " non-vacuous, counterexamples " +
                std::to_string(cx) + ", hypothesis disagreements " + std::to_string(disagree) +
                ", worst Caputo/RL residual " + fmt(worst_res)};
}

Outcome tool() {
    Tally t;
    long cases = 0;
    std::uint64_t seed = 10;
    for (double q : kQs) {
        for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            for (int w : {3, 5, 8}) {
                for (int k = 0; k < 20; ++k) {
                    GridFunction f = uniform({0, w - 1}, seed++);
                    ++cases;
                    for (int nb = 0; nb < w - 1; ++nb) t.residual(composition_residual(f, w - 1, nb, QParams(q, alpha)), 1e-9);
                }
            }
        }
    }
    return {t.failures == 0 && cases >= 900, std::to_string(cases) + " functions, " + std::to_string(t.checks) +
                                                 " (a, b) pairs, worst residual " + fmt(t.worst)};
}

Outcome mvt() {
    long cases = 0, fails = 0, mq_bad = 0;
    double worst = INFINITY;
    std::uint64_t seed = 11;
    for (double q : kQs) {
        for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const QParams p(q, alpha);
            for (int w : {3, 5, 8}) {
                for (int k = 0; k < 20; ++k) {
                    const int na = w - 1, nb = k % na;
                    GridFunction f = uniform({0, na}, seed++);
                    GridFunction g = o::sample_random_grid_function({0, na}, o::Distribution::Increasing, seed++);
                    MvtWitnesses wit = mvt_witnesses(f, g, na, nb, p);
                    ++cases;
                    worst = std::min(worst, wit.sandwich_margin() + wit.tau);
                    if (!wit.sandwich_holds()) ++fails;
                    const double m = m_q(na, nb, p);
                    if (!(m > 0.0 && m < 1.0)) ++mq_bad;
                }
            }
        }
    }
    long trend_bad = 0;
    for (double q : kQs) {
        for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            double prev = 1.0;
            for (int na : {5, 10, 20, 40}) {
                const double m = m_q(na, 0, QParams(q, alpha));
                if (!(m < prev && m > 0.0)) ++trend_bad;
                prev = m;
            }
        }
    }
    return {fails == 0 && cases >= 500 && mq_bad == 0 && trend_bad == 0,
            std::to_string(cases) + " cases, sandwich failures " + std::to_string(fails) +
                ", smallest slack " + fmt(worst) + ", M_q outside (0,1) " + std::to_string(mq_bad) +
                ", non-decreasing trend steps " + std::to_string(trend_bad)};
}

Outcome oracle_agreement() {
    double w_pow = 0, w_gamma = 0, w_int = 0, w_rl = 0, w_nabla = 0;
    SplitMix64 rng(12);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    for (int k = 0; k < 1000; ++k) {
        const double q = kQs[k % 3];
        const double alpha = rng.uniform(0.05, 0.95);
        const int m = 1 + static_cast<int>(rng.next() % 25);
        const double t = point_value(static_cast<int>(rng.next() % 9) - 4, q);
        const double power = rng.uniform(-0.95, 3.0);
        w_pow = std::max(w_pow, rel(q_pow_frac(t, t * std::pow(q, m), power, q).value,
                                    o::q_pow_frac(t, t * std::pow(q, m), power, q)));
        const double x = rng.uniform(0.05, 5.0);
        w_gamma = std::max(w_gamma, rel(q_gamma(x, q).value, o::q_gamma(x, q)));
        const int width = 2 + static_cast<int>(rng.next() % 12);
        GridFunction f = uniform({0, width}, rng.next());
        const int nt = static_cast<int>(rng.next() % width);
        const QParams p(q, alpha);
        w_int = std::max(w_int, rel(q_frac_integral(f, width, nt, p), o::frac_integral(f, width, nt, p)));
        w_rl = std::max(w_rl, rel(rl_q_derivative(f, width, nt, p), o::rl_derivative(f, width, nt, p)));
        w_nabla = std::max(w_nabla, rel(nabla_q_integral(f, width, nt, p), o::nabla_q_integral(f, width, nt, p)));
    }
    const double worst = std::max({w_pow, w_gamma, w_int, w_rl, w_nabla});
    return {worst < 1e-11, "worst rel diff: q-power " + fmt(w_pow) + ", q-gamma " + fmt(w_gamma) +
                               ", fractional integral " + fmt(w_int) + ", RL derivative " + fmt(w_rl) +
                               ", nabla integral " + fmt(w_nabla)};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QMONO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism() {
    const auto base = std::filesystem::temp_directory_path();
    const auto a = base / "qmono_acceptance_a", b = base / "qmono_acceptance_b";
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
    const int ca = run_cli("verify --seed 42 --out " + a.string());
    const int cb = run_cli("verify --seed 42 --out " + b.string());
    const std::string csv_a = slurp(a / "report.csv"), csv_b = slurp(b / "report.csv");
    const bool same = !csv_a.empty() && csv_a == csv_b;
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
    return {ca == 0 && cb == 0 && same, "exit codes " + std::to_string(ca) + "/" + std::to_string(cb) + ", " +
                                            std::to_string(csv_a.size()) + "-byte CSVs " +
                                            (same ? "identical" : "differ")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "basic calculus identities", basic_calculus},
        {2, "q-factorial recurrences", recurrences},
        {3, "power rule", power_rule},
        {4, "integral of Caputo derivative", caputo_composition},
        {5, "Caputo / Riemann-Liouville relation", caputo_rl},
        {6, "c_q-increasing from nonnegative RL derivative", theorem1},
        {7, "converse and strict theorems", converse},
        {8, "decreasing mirror theorems", decreasing},
        {9, "Caputo form of the monotonicity result", corollary},
        {10, "integral of the RL derivative", tool},
        {11, "mean value theorem and M_q bounds", mvt},
        {12, "oracle agreement", oracle_agreement},
        {13, "CLI determinism", cli_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > 60.0) {
            r.pass = false;
            r.detail += " (exceeded 60 s)";
        }
        if (!r.pass) ++failed;
        std::printf("%s %2d %s: %s [%.2f s]\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
