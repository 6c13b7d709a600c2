#include "qmono/mvt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmono/errors.hpp"
#include "qmono/frac.hpp"

namespace qmono {

namespace {

void check_mvt_args(int n_a, int n_b, const QParams& params) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw OrderError("needs order in (0, 1), got " + std::to_string(alpha));
    }
    if (n_b >= n_a) {
        throw DomainError("needs b > a, i.e. n_b < n_a (got n_a = " + std::to_string(n_a) +
                          ", n_b = " + std::to_string(n_b) + ")");
    }
}

double m_q_with_lower(int n_a, int n_b, double lower_shift, const QParams& params,
                      const QPowerConfig& cfg) {
    check_mvt_args(n_a, n_b, params);
    const double q = params.q();
    const double alpha = params.alpha();
    const double a = point_value(n_a, q);
    const double b = point_value(n_b, q);
    const double num = (1.0 - q) * std::pow(a, 1.0 - alpha) *
                       q_pow_frac(b, lower_shift * a, alpha - 1.0, q, cfg).value *
                       q_pow_frac(1.0, q, -alpha, q, cfg).value;
    return num / (q_gamma(alpha, q, cfg).value * q_gamma(1.0 - alpha, q, cfg).value);
}

}  // namespace

double m_q(int n_a, int n_b, const QParams& params, const QPowerConfig& cfg) {
    return m_q_with_lower(n_a, n_b, params.q(), params, cfg);
}

double m_q_unshifted(int n_a, int n_b, const QParams& params, const QPowerConfig& cfg) {
    return m_q_with_lower(n_a, n_b, 1.0, params, cfg);
}

double integral_of_rl_derivative(const GridFunction& f, int n_a, int n_b, const QParams& params,
                                 const QPowerConfig& cfg) {
    check_mvt_args(n_a, n_b, params);
    f.require({n_b, n_a}, "integral_of_rl_derivative");
    const RlDerivative rl(params, n_a - n_b + 1, cfg);
    const GridFunction h = rl.tabulate(f, n_a, {n_b, n_a - 1});
    return QFracIntegral(params, n_a - n_b, cfg)(h, n_a, n_b);
}

double composition_residual(const GridFunction& f, int n_a, int n_b, const QParams& params,
                            const QPowerConfig& cfg) {
    const double lhs = integral_of_rl_derivative(f, n_a, n_b, params, cfg);
    const double k = m_q(n_a, n_b, params, cfg);
    const double scale = std::max(std::abs(f(n_b)), k * std::abs(f(n_a)));
    return relative_residual(lhs, f(n_b) - k * f(n_a), scale);
}

double MvtWitnesses::sandwich_margin() const {
    return std::min(quotient - min_ratio, max_ratio - quotient);
}

MvtWitnesses mvt_witnesses(const GridFunction& f, const GridFunction& g, int n_a, int n_b,
                           const QParams& params, const QPowerConfig& cfg) {
    check_mvt_args(n_a, n_b, params);
    f.require({n_b, n_a}, "mvt_witnesses (f)");
    g.require({n_b, n_a}, "mvt_witnesses (g)");
    if (!(g(n_a) > 0.0)) {
        throw HypothesisError("mvt_witnesses: g(a) must be positive, got " + std::to_string(g(n_a)));
    }
    for (int n = n_b + 1; n <= n_a; ++n) {
        if (!(g(n - 1) > g(n))) {
            throw HypothesisError("mvt_witnesses: g is not strictly increasing between exponents " +
                                  std::to_string(n) + " and " + std::to_string(n - 1));
        }
    }

    const double k = m_q(n_a, n_b, params, cfg);
    const double den = g(n_b) - k * g(n_a);
    if (std::abs(den) <= 1e-13 * std::max(std::abs(g(n_b)), k * std::abs(g(n_a)))) {
        throw DomainError("mvt_witnesses: g(b) - M g(a) vanishes numerically");
    }

    const RlDerivative rl(params, n_a - n_b + 1, cfg);
    MvtWitnesses w{};
    w.delta_window = {n_b, n_a};
    w.quotient = (f(n_b) - k * f(n_a)) / den;
    bool first = true;
    for (int n = n_b; n < n_a; ++n) {
        const double dg = rl(g, n_a, n);
        if (!(dg > 0.0)) {
            throw HypothesisError("mvt_witnesses: derivative of g is not positive at exponent " +
                                  std::to_string(n));
        }
        const double ratio = rl(f, n_a, n) / dg;
        if (first || ratio < w.min_ratio) {
            w.min_ratio = ratio;
            w.r1_exponent = n;
        }
        if (first || ratio > w.max_ratio) {
            w.max_ratio = ratio;
            w.r2_exponent = n;
        }
        first = false;
    }
    w.tau = 1e-11 * std::max({1.0, std::abs(w.min_ratio), std::abs(w.max_ratio)});
    return w;
}

}  // namespace qmono
