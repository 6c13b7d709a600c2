#pragma once

#include <limits>
#include <optional>
#include <string_view>

#include "qmono/core.hpp"
#include "qmono/grid.hpp"

namespace qmono {

/// c_q(α) = [α]_q q^{1-α}. In [0, 1] for 0 <= α <= 1, at least 1 for α >= 1.
double c_q(double alpha, double q);

/**
 * Sign tolerance: an inequality "x >= 0" is accepted as x >= -τ with
 * τ = rel * max(1, max |y| on the window).
 */
struct SignTolerance {
    double rel = 1e-11;

    double for_function(const GridFunction& y) const;
};

/// Outcome of a pointwise inequality scan.
struct MarginCheck {
    bool holds = true;
    /// Smallest slack seen (+inf when nothing was checked).
    double worst_margin = std::numeric_limits<double>::infinity();
    /// Exponent where the smallest slack occurs.
    std::optional<int> witness;
};

/// y(q^{n-1}) >= c_q(α) y(q^n) for every pair with both exponents in `range`.
MarginCheck is_cq_increasing(const GridFunction& y, ExponentRange range, const QParams& params,
                             double tau);
/// y(q^{n-1}) <= c_q(α) y(q^n) for every pair with both exponents in `range`.
MarginCheck is_cq_decreasing(const GridFunction& y, ExponentRange range, const QParams& params,
                             double tau);

/// min_k [y(q^{n0-k}) - c_q(α)^k y(q^{n0})] for k = 1..n0-n_min.
double cq_chain_margin(const GridFunction& y, int n0, int n_min, const QParams& params);

enum class TheoremId { Thm1, Converse, Strict, Decreasing1, Decreasing2, Corollary };

std::string_view to_string(TheoremId id);
TheoremId parse_theorem_id(std::string_view name);

struct MonotonicityReport {
    TheoremId theorem = TheoremId::Thm1;
    bool hypotheses_hold = false;
    bool conclusion_holds = false;
    double hypothesis_margin = std::numeric_limits<double>::infinity();
    double conclusion_margin = std::numeric_limits<double>::infinity();
    std::optional<int> hypothesis_witness;
    std::optional<int> witness_exponent;
    /// Corollary only: largest Caputo/RL relation residual over the checked points.
    std::optional<double> consistency_residual;
    /// Corollary only: Caputo hypothesis agrees with the RL hypothesis of Thm1.
    std::optional<bool> hypotheses_agree;

    /// The conclusion says nothing when the hypotheses fail.
    bool vacuous() const { return !hypotheses_hold; }
    /// A genuine counterexample: hypotheses hold, conclusion fails.
    bool counterexample() const { return hypotheses_hold && !conclusion_holds; }
    double worst_margin() const;
};

/**
 * Positive RL derivative implies c_q(α)-increasing. With a = q^{n0} and
 * n_min = y.n_lo(): hypotheses are y(a) >= -τ and the derivative anchored at
 * a q is >= -τ at every n in [n_min, n0 - 1]; the conclusion is checked on all
 * consecutive pairs in [n_min, n0].
 */
MonotonicityReport verify_thm1(const GridFunction& y, int n0, const QParams& params,
                               const QPowerConfig& cfg = QPowerConfig{}, SignTolerance tol = {});

/**
 * Increasing y with y(a) >= 0 has a nonnegative RL derivative. Strict mode
 * needs strictly increasing y with y(a) > 0 and concludes derivative > τ.
 */
MonotonicityReport verify_converse(const GridFunction& y, int n0, const QParams& params, bool strict,
                                   const QPowerConfig& cfg = QPowerConfig{}, SignTolerance tol = {});

/**
 * Caputo form of verify_thm1. The Caputo derivative is anchored at a q, so y
 * must also be known at q a = q^{n0 + 1}. The hypothesis is
 * C y(t) >= -(t - q a)_q^{-α} / Γ_q(1-α) · y(q a) together with y(a) >= 0.
 * Order 1 compares ∇_q y(t) with zero.
 */
MonotonicityReport verify_corollary(const GridFunction& y, int n0, const QParams& params,
                                    const QPowerConfig& cfg = QPowerConfig{}, SignTolerance tol = {});

enum class DecreasingDirection {
    FromDerivative,  ///< y(a) <= 0 and derivative <= 0 imply c_q(α)-decreasing
    FromMonotone,    ///< y decreasing and y(a) <= 0 imply derivative <= 0
};

MonotonicityReport verify_decreasing(const GridFunction& y, int n0, const QParams& params,
                                     DecreasingDirection direction,
                                     const QPowerConfig& cfg = QPowerConfig{}, SignTolerance tol = {});

}  // namespace qmono
