#include "qmono/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "qmono/errors.hpp"

namespace qmono {

namespace {

constexpr double kTiny = 1e-300;
// |1 - b q^i| below this is treated as a vanishing denominator.
constexpr double kSingularDen = 1e-13;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

/// Π_{i>=0} (1 - a q^i) / (1 - b q^i), stopped at the first factor within rel_tol of 1.
OperatorResult ratio_product(double a, double b, double q, const QPowerConfig& cfg,
                             const char* who) {
    double prod = 1.0;
    double ai = a;
    double bi = b;
    for (int i = 0; i < cfg.max_terms(); ++i) {
        const double den = 1.0 - bi;
        if (std::abs(den) < kSingularDen) {
            throw SingularityError(std::string(who) + ": denominator factor vanishes at i = " +
                                   std::to_string(i));
        }
        const double factor = (1.0 - ai) / den;
        prod *= factor;
        const double dev = std::abs(factor - 1.0);
        if (dev < cfg.rel_tol()) {
            // Factors beyond i shrink at least geometrically with ratio q.
            const double tail = 1.01 * dev * q / (1.0 - q);
            return {prod, std::abs(prod) * std::expm1(tail)};
        }
        ai *= q;
        bi *= q;
    }
    throw ConvergenceError(std::string(who) + ": product did not converge within " +
                           std::to_string(cfg.max_terms()) + " factors");
}

void require_q(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("q must lie in (0, 1), got " + std::to_string(q));
    }
}

}  // namespace

QPowerConfig::QPowerConfig(double rel_tol, int max_terms)
    : rel_tol_(rel_tol), max_terms_(max_terms) {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) {
        throw DomainError("rel_tol must lie in (0, 1e-6]");
    }
    if (max_terms < 64) {
        throw DomainError("max_terms must be at least 64");
    }
}

double relative_residual(double lhs, double rhs, double scale) {
    const double denom = std::max({std::abs(lhs), std::abs(rhs), std::abs(scale), kTiny});
    return std::abs(lhs - rhs) / denom;
}

double q_bracket(double x, double q) { return (1.0 - std::pow(q, x)) / (1.0 - q); }

double nabla_q_derivative(const GridFunction& f, int n, const QParams& params) {
    f.require({n, n + 1}, "nabla_q_derivative");
    const double q = params.q();
    return (f(n) - f(n + 1)) / ((1.0 - q) * point_value(n, q));
}

GridFunction nabla_q_derivative_grid(const GridFunction& f, int order, const QParams& params) {
    if (order < 0) {
        throw DomainError("derivative order must be nonnegative");
    }
    GridFunction g = f;
    for (int k = 0; k < order; ++k) {
        if (g.size() < 2) {
            throw WindowError("nabla_q_derivative_grid: window too small for order " +
                                  std::to_string(order),
                              g.n_hi() + 1);
        }
        std::vector<double> next;
        next.reserve(g.size() - 1);
        for (int n = g.n_lo(); n < g.n_hi(); ++n) next.push_back(nabla_q_derivative(g, n, params));
        g = GridFunction(g.n_lo(), std::move(next));
    }
    return g;
}

double nabla_q_integral(const GridFunction& f, int n_a, int n_t, const QParams& params) {
    if (n_t > n_a) {
        throw DomainError("nabla_q_integral: upper limit q^" + std::to_string(n_t) +
                          " lies below lower limit q^" + std::to_string(n_a));
    }
    if (n_t == n_a) return 0.0;
    f.require({n_t, n_a - 1}, "nabla_q_integral");
    const double q = params.q();
    double sum = 0.0;
    for (int i = n_t; i < n_a; ++i) sum += point_value(i, q) * f(i);
    return (1.0 - q) * sum;
}

OperatorResult nabla_q_integral_from_zero(const FunctionExpr& f, int n_t, const QParams& params,
                                          const QPowerConfig& cfg) {
    const double q = params.q();
    const double t = point_value(n_t, q);
    std::deque<double> recent;
    double sum = 0.0;
    double qi = 1.0;
    int small_run = 0;
    for (int i = 0; i < cfg.max_terms(); ++i) {
        const double v = evaluate(f, n_t + i, q);
        const double term = qi * v;
        sum += term;
        recent.push_back(std::abs(v));
        if (recent.size() > 10) recent.pop_front();
        small_run = std::abs(term) <= cfg.rel_tol() * std::abs(sum) ? small_run + 1 : 0;
        if (small_run == 3) {
            const double m = *std::max_element(recent.begin(), recent.end());
            return {(1.0 - q) * t * sum, t * qi * q * m};
        }
        qi *= q;
    }
    throw ConvergenceError("nabla_q_integral_from_zero: series did not converge within " +
                           std::to_string(cfg.max_terms()) + " terms");
}

double q_pow_int(double t, double s, int n, double q) {
    if (n < 0) {
        throw DomainError("q_pow_int: n must be nonnegative; use q_pow_frac for negative orders");
    }
    double prod = 1.0;
    double qi = 1.0;
    for (int i = 0; i < n; ++i) {
        prod *= t - qi * s;
        qi *= q;
    }
    return prod;
}

OperatorResult q_pow_frac(double t, double s, double power, double q, const QPowerConfig& cfg) {
    require_q(q);
    if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(s) || !std::isfinite(power)) {
        throw DomainError("q_pow_frac: needs finite t > 0, got t = " + std::to_string(t));
    }
    if (s == 0.0) return {std::pow(t, power), 0.0};
    if (power == 0.0) return {1.0, 0.0};
    double r = s / t;
    // grid arguments with s == t can land a few ulps above 1
    if (r > 1.0 && r <= 1.0 + 8 * std::numeric_limits<double>::epsilon()) r = 1.0;
    if (r > 1.0) {
        throw DomainError("q_pow_frac: s/t = " + std::to_string(r) + " must be below 1");
    }
    const OperatorResult p = ratio_product(r, r * std::pow(q, power), q, cfg, "q_pow_frac");
    const double scale = std::pow(t, power);
    return {scale * p.value, scale * p.trunc_error_bound};
}

OperatorResult q_gamma(double x, double q, const QPowerConfig& cfg) {
    require_q(q);
    if (is_nonpositive_integer(x)) {
        throw PoleError("q_gamma: pole at x = " + std::to_string(x));
    }
    const OperatorResult p = ratio_product(q, std::pow(q, x), q, cfg, "q_gamma");
    const double scale = std::pow(1.0 - q, 1.0 - x);
    return {scale * p.value, scale * p.trunc_error_bound};
}

PowerTable::PowerTable(double q, double power, int max_offset, const QPowerConfig& cfg)
    : q_(q), power_(power) {
    if (max_offset < 0) {
        throw DomainError("PowerTable: max_offset must be nonnegative");
    }
    unit_.reserve(static_cast<std::size_t>(max_offset) + 1);
    double qm = 1.0;
    for (int m = 0; m <= max_offset; ++m) {
        const OperatorResult r = q_pow_frac(1.0, qm, power, q, cfg);
        unit_.push_back(r.value);
        if (r.value != 0.0) rel_bound_ = std::max(rel_bound_, r.trunc_error_bound / std::abs(r.value));
        qm = point_value(m + 1, q);
    }
}

double PowerTable::unit(int m) const {
    if (m < 0 || m > max_offset()) {
        throw DomainError("PowerTable: offset " + std::to_string(m) + " outside [0, " +
                          std::to_string(max_offset()) + "]");
    }
    return unit_[static_cast<std::size_t>(m)];
}

double PowerTable::at(int n, int i) const {
    return std::pow(q_, static_cast<double>(n) * power_) * unit(i - n);
}

double recurrence_residual(Recurrence kind, int m, int n, int i, double alpha, double q,
                           const QPowerConfig& cfg) {
    require_q(q);
    const auto qp = [q](double e) { return std::pow(q, e); };
    const auto pw = [&](double t, double s) { return q_pow_frac(t, s, -alpha, q, cfg).value; };
    double lhs = 0.0;
    double rhs = 0.0;
    switch (kind) {
        case Recurrence::R1:
            if (i < 1) throw DomainError("recurrence R1 needs i >= 1");
            lhs = pw(1.0, qp(i));
            rhs = (1.0 - qp(i)) / (1.0 - qp(i - alpha)) * pw(1.0, qp(i + 1));
            break;
        case Recurrence::R2:
            if (n > -2) throw DomainError("recurrence R2 needs n <= -2");
            lhs = pw(qp(n + 1), 1.0);
            rhs = (1.0 - qp(-1 - n)) / (qp(alpha) - qp(-1 - n)) * pw(qp(n), 1.0);
            break;
        case Recurrence::R3:
            if (m >= n) throw DomainError("recurrence R3 needs m < n");
            lhs = pw(qp(m), qp(n));
            rhs = (1.0 - qp(n - m)) / (qp(alpha) - qp(n - m)) * pw(qp(m - 1), qp(n));
            break;
        case Recurrence::R4:
            if (m >= n - 1) throw DomainError("recurrence R4 needs m < n - 1");
            lhs = pw(qp(m), qp(n - 1));
            rhs = (1.0 - qp(n - m - 1)) / (1.0 - qp(n - m - 1 - alpha)) * pw(qp(m), qp(n));
            break;
    }
    return relative_residual(lhs, rhs);
}

double power_addition_residual(double t, double s, double b, double c, double q,
                               const QPowerConfig& cfg) {
    const double lhs = q_pow_frac(t, s, b + c, q, cfg).value;
    const double rhs =
        q_pow_frac(t, s, b, q, cfg).value * q_pow_frac(t, std::pow(q, b) * s, c, q, cfg).value;
    return relative_residual(lhs, rhs);
}

double power_scaling_residual(double t, double s, double b, double k, double q,
                              const QPowerConfig& cfg) {
    if (!(k > 0.0)) throw DomainError("power_scaling_residual: scale must be positive");
    const double lhs = q_pow_frac(k * t, k * s, b, q, cfg).value;
    const double rhs = std::pow(k, b) * q_pow_frac(t, s, b, q, cfg).value;
    return relative_residual(lhs, rhs);
}

double power_nabla_t_residual(double t, double s, double a, double q, const QPowerConfig& cfg) {
    const double upper = q_pow_frac(t, s, a, q, cfg).value;
    const double lower = q_pow_frac(q * t, s, a, q, cfg).value;
    const double h = (1.0 - q) * t;
    const double lhs = (upper - lower) / h;
    const double rhs = q_bracket(a, q) * q_pow_frac(t, s, a - 1.0, q, cfg).value;
    return relative_residual(lhs, rhs, std::max(std::abs(upper), std::abs(lower)) / h);
}

double power_nabla_s_residual(double t, double s, double a, double q, const QPowerConfig& cfg) {
    if (s == 0.0) throw DomainError("power_nabla_s_residual: s must be nonzero");
    const double upper = q_pow_frac(t, s, a, q, cfg).value;
    const double lower = q_pow_frac(t, q * s, a, q, cfg).value;
    const double h = (1.0 - q) * s;
    const double lhs = (upper - lower) / h;
    const double rhs = -q_bracket(a, q) * q_pow_frac(t, q * s, a - 1.0, q, cfg).value;
    return relative_residual(lhs, rhs, std::max(std::abs(upper), std::abs(lower)) / std::abs(h));
}

}  // namespace qmono
