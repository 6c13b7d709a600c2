#pragma once

#include <vector>

#include "qmono/grid.hpp"

namespace qmono {

/// Truncation controls for the infinite q-products (q-factorial powers, q-Gamma).
class QPowerConfig {
public:
    /// Throws DomainError unless rel_tol is in (0, 1e-6] and max_terms >= 64.
    explicit QPowerConfig(double rel_tol = 1e-15, int max_terms = 10'000);

    double rel_tol() const { return rel_tol_; }
    int max_terms() const { return max_terms_; }

private:
    double rel_tol_;
    int max_terms_;
};

/// An operator value and an a-posteriori bound on its truncation error.
struct OperatorResult {
    double value = 0.0;
    double trunc_error_bound = 0.0;
};

/// |lhs - rhs| / max(|lhs|, |rhs|, scale, tiny). `scale` is the magnitude of the
/// operands an identity was built from, so cancelling identities stay meaningful.
double relative_residual(double lhs, double rhs, double scale = 0.0);

/// [x]_q = (1 - q^x) / (1 - q).
double q_bracket(double x, double q);

/// ∇_q f(q^n) = (f(q^n) - f(q^{n+1})) / ((1 - q) q^n). Needs n and n+1 in the window.
double nabla_q_derivative(const GridFunction& f, int n, const QParams& params);

/// k-fold nabla q-derivative tabulated on [n_lo, n_hi - order].
GridFunction nabla_q_derivative_grid(const GridFunction& f, int order, const QParams& params);

/**
 * ∫_a^t f(s) ∇_q s for a = q^{n_a}, t = q^{n_t}, n_t <= n_a:
 * (1 - q) Σ_{i=n_t}^{n_a-1} q^i f(q^i), zero when n_t == n_a.
 *
 * Throws DomainError when n_t > n_a (t < a); swap the limits explicitly.
 */
double nabla_q_integral(const GridFunction& f, int n_a, int n_t, const QParams& params);

/**
 * ∫_0^t f(s) ∇_q s = (1 - q) t Σ_{i>=0} q^i f(t q^i) for t = q^{n_t}.
 *
 * The series stops once three consecutive terms fall below rel_tol times the
 * partial sum. The bound is t q^{I+1} M, M the largest |f| over the last ten terms.
 */
OperatorResult nabla_q_integral_from_zero(const FunctionExpr& f, int n_t, const QParams& params,
                                          const QPowerConfig& cfg = QPowerConfig{});

/// (t - s)_q^n = Π_{i<n} (t - q^i s). Empty product for n == 0.
double q_pow_int(double t, double s, int n, double q);

/**
 * (t - s)_q^power = t^power Π_{i>=0} (1 - (s/t) q^i) / (1 - (s/t) q^{i+power}).
 *
 * Requires t > 0 and s/t < 1 (s == t gives 0 for power != 0). s == 0 returns
 * t^power exactly with a zero bound.
 */
OperatorResult q_pow_frac(double t, double s, double power, double q,
                          const QPowerConfig& cfg = QPowerConfig{});

/// Γ_q(x) = (1 - q)^{1-x} Π_{k>=0} (1 - q^{k+1}) / (1 - q^{k+x}). PoleError at x = 0, -1, ...
OperatorResult q_gamma(double x, double q, const QPowerConfig& cfg = QPowerConfig{});

/**
 * Table of (q^n - q^i)_q^power for offsets i - n in [0, max_offset].
 *
 * Built from the unit powers (1 - q^m)_q^power and the scaling property
 * (q^n x - q^n y)_q^power = q^{n power} (x - y)_q^power.
 */
class PowerTable {
public:
    PowerTable(double q, double power, int max_offset, const QPowerConfig& cfg);

    double power() const { return power_; }
    int max_offset() const { return static_cast<int>(unit_.size()) - 1; }

    /// (1 - q^m)_q^power.
    double unit(int m) const;
    /// (q^n - q^i)_q^power for n <= i <= n + max_offset.
    double at(int n, int i) const;
    /// Largest relative truncation bound over the table.
    double rel_error_bound() const { return rel_bound_; }

private:
    double q_;
    double power_;
    std::vector<double> unit_;
    double rel_bound_ = 0.0;
};

/// Four q-factorial recurrences in the exponents of the arguments.
enum class Recurrence {
    R1,  ///< (1-q^i)^{-a} = (1-q^i)/(1-q^{i-a}) (1-q^{i+1})^{-a}, i >= 1
    R2,  ///< (q^{n+1}-1)^{-a} = (1-q^{-1-n})/(q^a-q^{-1-n}) (q^n-1)^{-a}, n <= -2
    R3,  ///< (q^m-q^n)^{-a} = (1-q^{n-m})/(q^a-q^{n-m}) (q^{m-1}-q^n)^{-a}, m < n
    R4,  ///< (q^m-q^{n-1})^{-a} = (1-q^{n-m-1})/(1-q^{n-m-1-a}) (q^m-q^n)^{-a}, m < n-1
};

/// Relative residual of one recurrence; both sides evaluated with q_pow_frac.
/// Unused exponents are ignored. Throws DomainError for inconsistent exponents.
double recurrence_residual(Recurrence kind, int m, int n, int i, double alpha, double q,
                           const QPowerConfig& cfg = QPowerConfig{});

/// (t-s)^{b+c} against (t-s)^b (t-q^b s)^c.
double power_addition_residual(double t, double s, double b, double c, double q,
                               const QPowerConfig& cfg = QPowerConfig{});

/// (kt-ks)^b against k^b (t-s)^b.
double power_scaling_residual(double t, double s, double b, double k, double q,
                              const QPowerConfig& cfg = QPowerConfig{});

/// ∇_q in t of (t-s)^a against [a]_q (t-s)^{a-1}. Normalised by the differenced operands.
double power_nabla_t_residual(double t, double s, double a, double q,
                              const QPowerConfig& cfg = QPowerConfig{});

/// ∇_q in s of (t-s)^a against -[a]_q (t-qs)^{a-1}. Normalised by the differenced operands.
double power_nabla_s_residual(double t, double s, double a, double q,
                              const QPowerConfig& cfg = QPowerConfig{});

}  // namespace qmono
