#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace qmono {

/**
 * QParams: the base q of the time scale T_q = {q^n} ∪ {0} and an order alpha.
 *
 * q is validated on construction (0 < q < 1). alpha is only stored; each
 * operator checks the orders it accepts.
 */
class QParams {
public:
    QParams(double q, double alpha = 1.0);

    double q() const { return q_; }
    double alpha() const { return alpha_; }

    QParams with_alpha(double alpha) const { return QParams(q_, alpha); }

private:
    double q_;
    double alpha_;
};

/// Closed interval of exponents [lo, hi]. Larger exponents are smaller points.
struct ExponentRange {
    int lo;
    int hi;

    bool contains(int n) const { return lo <= n && n <= hi; }
    bool empty() const { return hi < lo; }
    int length() const { return empty() ? 0 : hi - lo + 1; }
};

/// A nonzero point q^n of T_q, identified by its exponent.
struct GridPoint {
    int exponent;

    double value(double q) const;
};

/// q^n. Strictly decreasing in n for fixed 0 < q < 1.
double point_value(int n, double q);

/// Real-order comparison of q^{n1} and q^{n2}, decided on exponents only.
/// q^{n1} > q^{n2} exactly when n1 < n2.
std::strong_ordering compare_points(int n1, int n2);

/**
 * Values y(q^n) for n in a finite window [n_lo, n_hi].
 *
 * Queries outside the window throw WindowError; there is no extrapolation.
 */
class GridFunction {
public:
    GridFunction(int n_lo, std::vector<double> values);

    int n_lo() const { return n_lo_; }
    int n_hi() const { return n_lo_ + static_cast<int>(values_.size()) - 1; }
    ExponentRange window() const { return {n_lo(), n_hi()}; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    bool contains(int n) const { return window().contains(n); }

    /// y(q^n); throws WindowError outside the window.
    double operator()(int n) const;

    /// Throws WindowError naming the first exponent of `needed` not covered.
    void require(ExponentRange needed, std::string_view who) const;

    double max_abs() const;

    GridFunction negated() const;
    /// Restriction to a sub-window (throws WindowError if not covered).
    GridFunction restricted(ExponentRange range) const;
    /// Copy with one more point appended at exponent n_hi() + 1.
    GridFunction extended(double next_value) const;

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    int n_lo_;
    std::vector<double> values_;
};

/// a*f + b*g on the common window of f and g.
GridFunction linear_combination(double a, const GridFunction& f, double b, const GridFunction& g);

namespace expr {

struct Constant {
    double value;
};

/// t itself.
struct Identity {};

/// The q-factorial power (t - q^base_exponent)_q^power.
struct QPower {
    int base_exponent;
    double power;
};

struct Tabulated {
    int n_lo;
    std::vector<double> values;
};

}  // namespace expr

using FunctionExpr = std::variant<expr::Constant, expr::Identity, expr::QPower, expr::Tabulated,
                                  std::function<double(double)>>;

/// Value of an expression at the grid point q^n. Throws EvaluationError naming n.
double evaluate(const FunctionExpr& f, int n, double q);

/// Samples an expression on the window [n_lo, n_hi].
GridFunction sample(const FunctionExpr& f, ExponentRange window, const QParams& params);

}  // namespace qmono
