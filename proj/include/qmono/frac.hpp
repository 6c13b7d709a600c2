#pragma once

#include "qmono/core.hpp"
#include "qmono/grid.hpp"

namespace qmono {

/**
 * Lower-limit conventions
 * -----------------------
 * Every operator takes the exponent of its anchor explicitly; nothing is
 * shifted implicitly.
 *
 *  - QFracIntegral / caputo_q_derivative take `n_start`, the exponent of the
 *    lower limit L = q^{n_start}. Their sums run over i in [n_t, n_start - 1],
 *    so L itself is excluded.
 *  - RlDerivative / rl_q_derivative take `n_a`, the exponent of a, and are
 *    anchored at a q = q^{n_a + 1}. Their sums run over i in [n_t, n_a], so a
 *    itself is included.
 *
 * The Riemann-Liouville operator anchored at L therefore uses n_a = n_start - 1.
 */

/**
 * q-fractional integral of order params.alpha() anchored at q^{n_start}:
 *
 *   (1 / Γ_q(α)) (1 - q) Σ_{i=n_t}^{n_start-1} q^i (q^{n_t} - q^{i+1})_q^{α-1} f(q^i).
 *
 * The object caches Γ_q(α) and the kernel powers for spans up to max_span, so
 * it can be applied to many functions and points without recomputation.
 */
class QFracIntegral {
public:
    QFracIntegral(const QParams& params, int max_span, const QPowerConfig& cfg = QPowerConfig{});

    double operator()(const GridFunction& f, int n_start, int n_t) const;

    const QParams& params() const { return params_; }
    int max_span() const { return kernel_.max_offset(); }

private:
    QParams params_;
    double inv_gamma_;
    PowerTable kernel_;
};

/**
 * Riemann-Liouville q-fractional derivative of order params.alpha() in (0, 1],
 * anchored at a q with a = q^{n_a}:
 *
 *   s(q^m) = (1 - q) / Γ_q(1-α) Σ_{i=m}^{n_a} q^i (q^m - q^{i+1})_q^{-α} y(q^i),
 *   value  = (s(q^n) - s(q^{n+1})) / ((1 - q) q^n),   s(q^{n_a+1}) = 0.
 *
 * Order 1 delegates to nabla_q_derivative. Needs y on [n_t, n_a] (plus n_t + 1
 * for order 1).
 */
class RlDerivative {
public:
    RlDerivative(const QParams& params, int max_span, const QPowerConfig& cfg = QPowerConfig{});

    double operator()(const GridFunction& y, int n_a, int n_t) const;

    /// Values at every n in [n_lo, n_hi], as a grid function.
    GridFunction tabulate(const GridFunction& y, int n_a, ExponentRange points) const;

    const QParams& params() const { return params_; }

private:
    double fractional_sum(const GridFunction& y, int n_a, int m) const;

    QParams params_;
    double scale_ = 0.0;
    PowerTable kernel_;
};

/// One-shot q_frac_integral; order params.alpha() > 0.
double q_frac_integral(const GridFunction& f, int n_start, int n_t, const QParams& params,
                       const QPowerConfig& cfg = QPowerConfig{});

/// One-shot RL derivative anchored at q^{n_a + 1}; order in (0, 1].
double rl_q_derivative(const GridFunction& y, int n_a, int n_t, const QParams& params,
                       const QPowerConfig& cfg = QPowerConfig{});

/**
 * Caputo q-fractional derivative anchored at q^{n_start}: the (k - α)-order
 * integral of the k-fold nabla derivative, k = floor(α) + 1. Integer orders
 * return ∇_q^α f(q^{n_t}) directly. Needs f on [n_t, n_start - 1 + k].
 */
double caputo_q_derivative(const GridFunction& f, int n_start, int n_t, const QParams& params,
                           const QPowerConfig& cfg = QPowerConfig{});

/**
 * Residual of C_L^α f(t) = RL_L^α f(t) - (t - L)_q^{-α} / Γ_q(1-α) · f(L) with
 * L = q^{n_start}, 0 < α < 1. Normalised by the largest term.
 */
double caputo_rl_relation_residual(const GridFunction& f, int n_start, int n_t,
                                   const QParams& params, const QPowerConfig& cfg = QPowerConfig{});

/**
 * Residual of I_L^α C_L^α f(t) = f(t) - Σ_{k<K} (t - L)_q^k / Γ_q(k+1) ∇_q^k f(L)
 * with K = ceil(α). For 0 < α <= 1 the sum is just f(L); 1 < α <= 2 adds the
 * first-derivative term.
 */
double integral_of_caputo_residual(const GridFunction& f, int n_start, int n_t,
                                   const QParams& params, const QPowerConfig& cfg = QPowerConfig{});

/// Residual of I_a^α (x - a)_q^μ = Γ_q(μ+1) / Γ_q(α+μ+1) (x - a)_q^{μ+α}, a = q^{n_start}.
double power_rule_check(double mu, int n_start, int n_x, const QParams& params,
                        const QPowerConfig& cfg = QPowerConfig{});

}  // namespace qmono
