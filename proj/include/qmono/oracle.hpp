#pragma once

#include <cstdint>
#include <string_view>

#include "qmono/core.hpp"
#include "qmono/grid.hpp"

namespace qmono::oracle {

/**
 * Reference evaluation settings. The oracle is a second implementation in the
 * same number format: Neumaier-compensated sums, products accumulated as sums
 * of log1p terms with a tracked sign, powers of q taken directly with pow, and
 * a truncation threshold far below the main path's.
 */
class OracleConfig {
public:
    /// Throws DomainError unless rel_tol is in (0, 1e-8] and max_terms >= 64.
    explicit OracleConfig(double rel_tol = 1e-18, int max_terms = 100'000);

    double rel_tol() const { return rel_tol_; }
    int max_terms() const { return max_terms_; }

    /// At least 100x tighter than `main`.
    bool tighter_than(const QPowerConfig& main) const { return rel_tol_ * 100.0 <= main.rel_tol(); }

private:
    double rel_tol_;
    int max_terms_;
};

/// Neumaier's variant of Kahan summation.
class NeumaierSum {
public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double q_pow_frac(double t, double s, double power, double q, const OracleConfig& cfg = OracleConfig{});

double q_gamma(double x, double q, const OracleConfig& cfg = OracleConfig{});

/// Same contract as qmono::q_frac_integral; kernel powers evaluated directly.
double frac_integral(const GridFunction& f, int n_start, int n_t, const QParams& params,
                     const OracleConfig& cfg = OracleConfig{});

/// Same contract as qmono::rl_q_derivative; both partial sums share one accumulator.
double rl_derivative(const GridFunction& y, int n_a, int n_t, const QParams& params,
                     const OracleConfig& cfg = OracleConfig{});

/// Compensated form of qmono::nabla_q_integral.
double nabla_q_integral(const GridFunction& f, int n_a, int n_t, const QParams& params);

/// The composition constant of the integral/derivative identity, from oracle factors.
double composition_constant(int n_a, int n_b, const QParams& params,
                            const OracleConfig& cfg = OracleConfig{});

enum class Distribution { Uniform, Increasing, Decreasing, Spiky };

Distribution parse_distribution(std::string_view name);
std::string_view to_string(Distribution d);

/**
 * Deterministic random grid function on `window`.
 *
 * Draw order (SplitMix64 seeded with `seed`):
 *  - Uniform: for n = lo..hi, y(q^n) = uniform(-1, 1).
 *  - Increasing: v = uniform_pos() at n = hi, then for n = hi-1 down to lo,
 *    v += uniform_pos(). Strictly increasing in t and positive.
 *  - Decreasing: the negation of Increasing with the same seed.
 *  - Spiky: the Increasing draws, then for n = lo..hi: if uniform01() < 0.25,
 *    y(q^n) += uniform(-0.5, 0.5).
 */
GridFunction sample_random_grid_function(ExponentRange window, Distribution dist, std::uint64_t seed);

/**
 * Builds f on [g.n_lo(), n0] whose RL derivative anchored at a q (a = q^{n0})
 * equals g on [g.n_lo(), n0 - 1] and f(a) = f_a, by inverting the composition
 * identity: f(b) = K(a, b) f_a + (I_a^α g)(b). Order 1 uses f(b) = f_a + ∫_a^b g.
 *
 * The result is checked against the main-path derivative; a relative mismatch
 * above 1e-9 throws GeneratorError.
 */
GridFunction construct_from_derivative(const GridFunction& g, double f_a, int n0,
                                       const QParams& params, const OracleConfig& cfg = OracleConfig{});

/// Random instance satisfying the first monotonicity theorem's hypotheses:
/// g(q^n) ~ uniform01 on [n_min, n0 - 1] (in that order), then f_a ~ uniform01.
GridFunction generate_thm1_instance(int n0, int n_min, const QParams& params, std::uint64_t seed,
                                    const OracleConfig& cfg = OracleConfig{});

}  // namespace qmono::oracle
