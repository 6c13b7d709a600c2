#pragma once

#include "qmono/core.hpp"
#include "qmono/grid.hpp"

namespace qmono {

/**
 * The constant K in  I_a^α (RL_{aq}^α f)(b) = f(b) - K f(a),  a = q^{n_a}, b = q^{n_b}:
 *
 *   K = (1 - q) a^{1-α} (b - q a)_q^{α-1} (1 - q)_q^{-α} / (Γ_q(α) Γ_q(1-α)).
 *
 * Requires 0 < α < 1 and b > a (n_b < n_a). K lies in (0, 1) and tends to 0
 * as a -> 0 with b fixed.
 */
double m_q(int n_a, int n_b, const QParams& params, const QPowerConfig& cfg = QPowerConfig{});

/// The same expression with (b - a)_q^{α-1} in place of (b - q a)_q^{α-1}. It is
/// not the constant the composition produces; kept for comparison only.
double m_q_unshifted(int n_a, int n_b, const QParams& params, const QPowerConfig& cfg = QPowerConfig{});

/// I_a^α applied to t -> RL_{aq}^α f(t), evaluated at b. Needs f on [n_b, n_a].
double integral_of_rl_derivative(const GridFunction& f, int n_a, int n_b, const QParams& params,
                                 const QPowerConfig& cfg = QPowerConfig{});

/// Residual of integral_of_rl_derivative against f(b) - m_q f(a), normalised by
/// the largest of |lhs|, |f(b)| and m_q |f(a)|.
double composition_residual(const GridFunction& f, int n_a, int n_b, const QParams& params,
                            const QPowerConfig& cfg = QPowerConfig{});

struct MvtWitnesses {
    int r1_exponent;
    int r2_exponent;
    /// (f(b) - K f(a)) / (g(b) - K g(a)).
    double quotient;
    double min_ratio;
    double max_ratio;
    /// The exponent set Δ = [n_b, n_a].
    ExponentRange delta_window;
    /// Slack allowed on each side of the sandwich.
    double tau;

    bool sandwich_holds() const {
        return min_ratio - tau <= quotient && quotient <= max_ratio + tau;
    }
    /// min(quotient - min_ratio, max_ratio - quotient); negative means a gap.
    double sandwich_margin() const;
};

/**
 * Scans RL f / RL g over r = q^n, n in [n_b, n_a - 1] (both anchored at a q)
 * and returns the extreme ratios with their exponents; ties go to the smallest
 * exponent. g must be strictly increasing on Δ with g(a) > 0 (HypothesisError
 * otherwise). DomainError when g(b) - K g(a) is within 1e-13 max(|g(b)|, K|g(a)|)
 * of zero.
 */
MvtWitnesses mvt_witnesses(const GridFunction& f, const GridFunction& g, int n_a, int n_b,
                           const QParams& params, const QPowerConfig& cfg = QPowerConfig{});

}  // namespace qmono
