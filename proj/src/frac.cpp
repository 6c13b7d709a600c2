#include "qmono/frac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmono/errors.hpp"

namespace qmono {

namespace {

void require_span(int span, int max_span, const char* who) {
    if (span > max_span) {
        throw DomainError(std::string(who) + ": span " + std::to_string(span) +
                          " exceeds the kernel's max_span " + std::to_string(max_span));
    }
}

bool is_integer(double x) { return x == std::nearbyint(x); }

const QParams& integral_order(const QParams& params) {
    if (!(params.alpha() > 0.0)) {
        throw OrderError("q-fractional integral needs order > 0, got " +
                         std::to_string(params.alpha()));
    }
    return params;
}

const QParams& rl_order(const QParams& params) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw OrderError("Riemann-Liouville derivative needs order in (0, 1], got " +
                         std::to_string(alpha));
    }
    return params;
}

}  // namespace

QFracIntegral::QFracIntegral(const QParams& params, int max_span, const QPowerConfig& cfg)
    : params_(integral_order(params)),
      inv_gamma_(0.0),
      kernel_(params.q(), params.alpha() - 1.0, std::max(max_span, 0), cfg) {
    inv_gamma_ = 1.0 / q_gamma(params.alpha(), params.q(), cfg).value;
}

double QFracIntegral::operator()(const GridFunction& f, int n_start, int n_t) const {
    if (n_t > n_start) {
        throw DomainError("q_frac_integral: point q^" + std::to_string(n_t) +
                          " lies below the lower limit q^" + std::to_string(n_start));
    }
    if (n_t == n_start) return 0.0;
    require_span(n_start - n_t, max_span(), "q_frac_integral");
    f.require({n_t, n_start - 1}, "q_frac_integral");
    const double q = params_.q();
    double sum = 0.0;
    for (int i = n_t; i < n_start; ++i) {
        sum += point_value(i, q) * kernel_.unit(i + 1 - n_t) * f(i);
    }
    const double t_power = std::pow(q, static_cast<double>(n_t) * kernel_.power());
    return inv_gamma_ * (1.0 - q) * t_power * sum;
}

RlDerivative::RlDerivative(const QParams& params, int max_span, const QPowerConfig& cfg)
    : params_(rl_order(params)),
      kernel_(params.q(), params.alpha() == 1.0 ? 0.0 : -params.alpha(),
              params.alpha() == 1.0 ? 0 : std::max(max_span, 0), cfg) {
    if (params.alpha() < 1.0) {
        scale_ = (1.0 - params.q()) / q_gamma(1.0 - params.alpha(), params.q(), cfg).value;
    }
}

double RlDerivative::fractional_sum(const GridFunction& y, int n_a, int m) const {
    if (m > n_a) return 0.0;
    const double q = params_.q();
    double sum = 0.0;
    for (int i = m; i <= n_a; ++i) sum += point_value(i, q) * kernel_.unit(i + 1 - m) * y(i);
    return scale_ * std::pow(q, -static_cast<double>(m) * params_.alpha()) * sum;
}

double RlDerivative::operator()(const GridFunction& y, int n_a, int n_t) const {
    if (params_.alpha() == 1.0) return nabla_q_derivative(y, n_t, params_);
    if (n_t > n_a) {
        throw DomainError("rl_q_derivative: point q^" + std::to_string(n_t) +
                          " lies below the anchor's point a = q^" + std::to_string(n_a));
    }
    require_span(n_a - n_t + 1, kernel_.max_offset(), "rl_q_derivative");
    y.require({n_t, n_a}, "rl_q_derivative");
    const double q = params_.q();
    const double upper = fractional_sum(y, n_a, n_t);
    const double lower = fractional_sum(y, n_a, n_t + 1);
    return (upper - lower) / ((1.0 - q) * point_value(n_t, q));
}

GridFunction RlDerivative::tabulate(const GridFunction& y, int n_a, ExponentRange points) const {
    if (points.empty()) {
        throw DomainError("rl_q_derivative: empty evaluation range");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points.length()));
    for (int n = points.lo; n <= points.hi; ++n) out.push_back((*this)(y, n_a, n));
    return {points.lo, std::move(out)};
}

double q_frac_integral(const GridFunction& f, int n_start, int n_t, const QParams& params,
                       const QPowerConfig& cfg) {
    return QFracIntegral(params, std::max(n_start - n_t, 0), cfg)(f, n_start, n_t);
}

double rl_q_derivative(const GridFunction& y, int n_a, int n_t, const QParams& params,
                       const QPowerConfig& cfg) {
    return RlDerivative(params, std::max(n_a - n_t + 1, 0), cfg)(y, n_a, n_t);
}

double caputo_q_derivative(const GridFunction& f, int n_start, int n_t, const QParams& params,
                           const QPowerConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0)) {
        throw OrderError("Caputo derivative needs order > 0, got " + std::to_string(alpha));
    }
    if (is_integer(alpha)) {
        const int k = static_cast<int>(alpha);
        return nabla_q_derivative_grid(f.restricted({n_t, n_t + k}), k, params)(n_t);
    }
    if (n_t > n_start) {
        throw DomainError("caputo_q_derivative: point q^" + std::to_string(n_t) +
                          " lies below the lower limit q^" + std::to_string(n_start));
    }
    if (n_t == n_start) return 0.0;
    const int k = static_cast<int>(std::floor(alpha)) + 1;
    const GridFunction d =
        nabla_q_derivative_grid(f.restricted({n_t, n_start - 1 + k}), k, params);
    return q_frac_integral(d, n_start, n_t, params.with_alpha(k - alpha), cfg);
}

double caputo_rl_relation_residual(const GridFunction& f, int n_start, int n_t,
                                   const QParams& params, const QPowerConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw OrderError("Caputo/RL relation needs order in (0, 1), got " + std::to_string(alpha));
    }
    if (n_t >= n_start) {
        throw DomainError("caputo_rl_relation_residual: needs n_t < n_start");
    }
    const double q = params.q();
    const double caputo = caputo_q_derivative(f, n_start, n_t, params, cfg);
    const double rl = rl_q_derivative(f, n_start - 1, n_t, params, cfg);
    const double correction =
        q_pow_frac(point_value(n_t, q), point_value(n_start, q), -alpha, q, cfg).value /
        q_gamma(1.0 - alpha, q, cfg).value * f(n_start);
    return relative_residual(caputo, rl - correction,
                             std::max(std::abs(rl), std::abs(correction)));
}

double integral_of_caputo_residual(const GridFunction& f, int n_start, int n_t,
                                   const QParams& params, const QPowerConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw OrderError("integral_of_caputo_residual supports orders in (0, 2], got " +
                         std::to_string(alpha));
    }
    if (n_t > n_start) {
        throw DomainError("integral_of_caputo_residual: needs n_t <= n_start");
    }
    const double q = params.q();
    std::vector<double> caputo;
    for (int i = n_t; i < n_start; ++i) caputo.push_back(caputo_q_derivative(f, n_start, i, params, cfg));
    const double lhs =
        caputo.empty() ? 0.0
                       : q_frac_integral(GridFunction(n_t, std::move(caputo)), n_start, n_t, params, cfg);

    double rhs = f(n_t) - f(n_start);
    double scale = std::max(std::abs(f(n_t)), std::abs(f(n_start)));
    if (alpha > 1.0) {
        const double t = point_value(n_t, q);
        const double a = point_value(n_start, q);
        const double term = q_pow_int(t, a, 1, q) / q_gamma(2.0, q, cfg).value *
                            nabla_q_derivative(f, n_start, params);
        rhs -= term;
        scale = std::max(scale, std::abs(term));
    }
    return relative_residual(lhs, rhs, scale);
}

double power_rule_check(double mu, int n_start, int n_x, const QParams& params,
                        const QPowerConfig& cfg) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0)) {
        throw OrderError("power rule needs order > 0, got " + std::to_string(alpha));
    }
    if (!(mu > -1.0)) {
        throw DomainError("power rule needs mu > -1, got " + std::to_string(mu));
    }
    if (n_x >= n_start) {
        throw DomainError("power rule needs x > a, i.e. n_x < n_start");
    }
    const double q = params.q();
    const GridFunction f = sample(expr::QPower{n_start, mu}, {n_x, n_start - 1}, params);
    const double lhs = q_frac_integral(f, n_start, n_x, params, cfg);
    const double rhs = q_gamma(mu + 1.0, q, cfg).value / q_gamma(alpha + mu + 1.0, q, cfg).value *
                       q_pow_frac(point_value(n_x, q), point_value(n_start, q), mu + alpha, q, cfg).value;
    return relative_residual(lhs, rhs);
}

}  // namespace qmono
