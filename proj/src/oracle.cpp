#include "qmono/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qmono/errors.hpp"
#include "qmono/frac.hpp"
#include "qmono/random.hpp"

namespace qmono::oracle {

namespace {

/// Π (1 - num_i) / (1 - den_i) accumulated as a compensated sum of logs plus a sign.
class LogProduct {
public:
    /// Returns false once the product is exactly zero.
    bool multiply(double num, double den, const char* who) {
        if (den == 1.0) throw SingularityError(std::string(who) + ": denominator factor vanishes");
        if (num == 1.0) {
            zero_ = true;
            return false;
        }
        const double term = log_abs_one_minus(num) - log_abs_one_minus(den);
        log_.add(term);
        last_term_ = term;
        return true;
    }

    void add_log(double x) { log_.add(x); }
    double last_term() const { return last_term_; }
    double value() const {
        if (zero_) return 0.0;
        const double v = std::exp(log_.value());
        return negative_ ? -v : v;
    }

private:
    double log_abs_one_minus(double x) {
        if (x < 1.0) return std::log1p(-x);
        negative_ = !negative_;
        return std::log(x - 1.0);
    }

    NeumaierSum log_;
    bool negative_ = false;
    bool zero_ = false;
    double last_term_ = 0.0;
};

void check_q(double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0, 1)");
}

}  // namespace

OracleConfig::OracleConfig(double rel_tol, int max_terms) : rel_tol_(rel_tol), max_terms_(max_terms) {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-8)) throw DomainError("oracle rel_tol must lie in (0, 1e-8]");
    if (max_terms < 64) throw DomainError("oracle max_terms must be at least 64");
}

void NeumaierSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double q_pow_frac(double t, double s, double power, double q, const OracleConfig& cfg) {
    check_q(q);
    if (!(t > 0.0)) throw DomainError("oracle q_pow_frac: needs t > 0");
    if (s == 0.0) return std::pow(t, power);
    if (power == 0.0) return 1.0;
    double r = s / t;
    if (r > 1.0 && r <= 1.0 + 8 * std::numeric_limits<double>::epsilon()) r = 1.0;
    if (r > 1.0) throw DomainError("oracle q_pow_frac: s/t must be below 1");
    LogProduct prod;
    prod.add_log(power * std::log(t));
    for (int i = 0; i < cfg.max_terms(); ++i) {
        const double num = r * std::pow(q, static_cast<double>(i));
        const double den = r * std::pow(q, static_cast<double>(i) + power);
        if (!prod.multiply(num, den, "oracle q_pow_frac")) return 0.0;
        if (std::abs(prod.last_term()) < cfg.rel_tol()) return prod.value();
    }
    throw ConvergenceError("oracle q_pow_frac: product did not converge");
}

double q_gamma(double x, double q, const OracleConfig& cfg) {
    check_q(q);
    if (x <= 0.0 && x == std::nearbyint(x)) throw PoleError("oracle q_gamma: pole");
    LogProduct prod;
    prod.add_log((1.0 - x) * std::log1p(-q));
    for (int k = 0; k < cfg.max_terms(); ++k) {
        const double num = std::pow(q, static_cast<double>(k) + 1.0);
        const double den = std::pow(q, static_cast<double>(k) + x);
        prod.multiply(num, den, "oracle q_gamma");
        if (std::abs(prod.last_term()) < cfg.rel_tol()) return prod.value();
    }
    throw ConvergenceError("oracle q_gamma: product did not converge");
}

double frac_integral(const GridFunction& f, int n_start, int n_t, const QParams& params,
                     const OracleConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0)) throw OrderError("oracle frac_integral: order must be positive");
    if (n_t > n_start) throw DomainError("oracle frac_integral: needs n_t <= n_start");
    if (n_t == n_start) return 0.0;
    f.require({n_t, n_start - 1}, "oracle frac_integral");
    const double q = params.q();
    const double t = std::pow(q, static_cast<double>(n_t));
    NeumaierSum sum;
    for (int i = n_start - 1; i >= n_t; --i) {
        const double qi = std::pow(q, static_cast<double>(i));
        sum.add(qi * q_pow_frac(t, std::pow(q, static_cast<double>(i) + 1.0), alpha - 1.0, q, cfg) * f(i));
    }
    return (1.0 - q) * sum.value() / q_gamma(alpha, q, cfg);
}

double rl_derivative(const GridFunction& y, int n_a, int n_t, const QParams& params,
                     const OracleConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha <= 1.0)) throw OrderError("oracle rl_derivative: order must lie in (0, 1]");
    const double q = params.q();
    const double t = std::pow(q, static_cast<double>(n_t));
    if (alpha == 1.0) {
        y.require({n_t, n_t + 1}, "oracle rl_derivative");
        return (y(n_t) - y(n_t + 1)) / ((1.0 - q) * t);
    }
    if (n_t > n_a) throw DomainError("oracle rl_derivative: needs n_t <= n_a");
    y.require({n_t, n_a}, "oracle rl_derivative");
    const double qt = std::pow(q, static_cast<double>(n_t) + 1.0);
    NeumaierSum diff;
    for (int i = n_a; i >= n_t; --i) {
        const double qi = std::pow(q, static_cast<double>(i));
        const double s = std::pow(q, static_cast<double>(i) + 1.0);
        diff.add(qi * q_pow_frac(t, s, -alpha, q, cfg) * y(i));
        if (i > n_t) diff.add(-qi * q_pow_frac(qt, s, -alpha, q, cfg) * y(i));
    }
    return diff.value() / (q_gamma(1.0 - alpha, q, cfg) * t);
}

double nabla_q_integral(const GridFunction& f, int n_a, int n_t, const QParams& params) {
    if (n_t > n_a) throw DomainError("oracle nabla_q_integral: needs n_t <= n_a");
    if (n_t == n_a) return 0.0;
    f.require({n_t, n_a - 1}, "oracle nabla_q_integral");
    const double q = params.q();
    NeumaierSum sum;
    for (int i = n_a - 1; i >= n_t; --i) sum.add(std::pow(q, static_cast<double>(i)) * f(i));
    return (1.0 - q) * sum.value();
}

double composition_constant(int n_a, int n_b, const QParams& params, const OracleConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha < 1.0)) throw OrderError("composition constant needs order in (0, 1)");
    if (n_b >= n_a) throw DomainError("composition constant needs b > a, i.e. n_b < n_a");
    const double q = params.q();
    const double a = std::pow(q, static_cast<double>(n_a));
    const double b = std::pow(q, static_cast<double>(n_b));
    return (1.0 - q) * std::pow(a, 1.0 - alpha) * q_pow_frac(b, q * a, alpha - 1.0, q, cfg) *
           q_pow_frac(1.0, q, -alpha, q, cfg) / (q_gamma(alpha, q, cfg) * q_gamma(1.0 - alpha, q, cfg));
}

Distribution parse_distribution(std::string_view name) {
    if (name == "uniform") return Distribution::Uniform;
    if (name == "increasing") return Distribution::Increasing;
    if (name == "decreasing") return Distribution::Decreasing;
    if (name == "spiky") return Distribution::Spiky;
    throw DomainError("unknown distribution '" + std::string(name) + "'");
}

std::string_view to_string(Distribution d) {
    switch (d) {
        case Distribution::Uniform: return "uniform";
        case Distribution::Increasing: return "increasing";
        case Distribution::Decreasing: return "decreasing";
        case Distribution::Spiky: return "spiky";
    }
    return "unknown";
}

GridFunction sample_random_grid_function(ExponentRange window, Distribution dist, std::uint64_t seed) {
    if (window.empty()) throw DomainError("sample_random_grid_function: empty window");
    SplitMix64 rng(seed);
    const auto size = static_cast<std::size_t>(window.length());
    std::vector<double> values(size);
    if (dist == Distribution::Uniform) {
        for (double& v : values) v = rng.uniform(-1.0, 1.0);
        return {window.lo, std::move(values)};
    }
    double v = rng.uniform_pos();
    values[size - 1] = v;
    for (std::size_t k = size - 1; k-- > 0;) {
        v += rng.uniform_pos();
        values[k] = v;
    }
    if (dist == Distribution::Decreasing) {
        for (double& x : values) x = -x;
    } else if (dist == Distribution::Spiky) {
        for (double& x : values) {
            if (rng.uniform01() < 0.25) x += rng.uniform(-0.5, 0.5);
        }
    }
    return {window.lo, std::move(values)};
}

GridFunction construct_from_derivative(const GridFunction& g, double f_a, int n0, const QParams& params,
                                       const OracleConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha <= 1.0)) throw OrderError("construct_from_derivative: order must lie in (0, 1]");
    const int n_min = g.n_lo();
    if (n_min >= n0) throw DomainError("construct_from_derivative: needs n_min < n0");
    g.require({n_min, n0 - 1}, "construct_from_derivative");

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n0 - n_min + 1));
    for (int n = n_min; n < n0; ++n) {
        if (alpha == 1.0) {
            values.push_back(f_a + oracle::nabla_q_integral(g, n0, n, params));
        } else {
            values.push_back(composition_constant(n0, n, params, cfg) * f_a +
                             frac_integral(g, n0, n, params, cfg));
        }
    }
    values.push_back(f_a);
    GridFunction f(n_min, std::move(values));

    const RlDerivative rl(params, n0 - n_min + 1);
    double mismatch = 0.0;
    for (int n = n_min; n < n0; ++n) mismatch = std::max(mismatch, std::abs(rl(f, n0, n) - g(n)));
    const double scale = std::max({g.restricted({n_min, n0 - 1}).max_abs(), f.max_abs(), 1e-300});
    if (mismatch / scale > 1e-9) {
        throw GeneratorError("construct_from_derivative: derivative mismatch " +
                             std::to_string(mismatch / scale) + " exceeds 1e-9 (q = " +
                             std::to_string(params.q()) + ", alpha = " + std::to_string(alpha) + ")");
    }
    return f;
}

GridFunction generate_thm1_instance(int n0, int n_min, const QParams& params, std::uint64_t seed,
                                    const OracleConfig& cfg) {
    if (n_min >= n0) throw DomainError("generate_thm1_instance: needs n_min < n0");
    SplitMix64 rng(seed);
    std::vector<double> g(static_cast<std::size_t>(n0 - n_min));
    for (double& v : g) v = rng.uniform01();
    const double f_a = rng.uniform01();
    return construct_from_derivative(GridFunction(n_min, std::move(g)), f_a, n0, params, cfg);
}

}  // namespace qmono::oracle
