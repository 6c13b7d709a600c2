#include "qmono/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmono/core.hpp"
#include "qmono/errors.hpp"

namespace qmono {

QParams::QParams(double q, double alpha) : q_(q), alpha_(alpha) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("q must lie in (0, 1), got " + std::to_string(q));
    }
    if (!std::isfinite(alpha)) {
        throw DomainError("alpha must be finite");
    }
}

double GridPoint::value(double q) const { return point_value(exponent, q); }

double point_value(int n, double q) {
    // pow with an integral exponent is correctly rounded in glibc, hence monotone in n.
    return std::pow(q, static_cast<double>(n));
}

std::strong_ordering compare_points(int n1, int n2) { return n2 <=> n1; }

GridFunction::GridFunction(int n_lo, std::vector<double> values)
    : n_lo_(n_lo), values_(std::move(values)) {
    if (values_.empty()) {
        throw DomainError("grid function window must hold at least one point");
    }
}

double GridFunction::operator()(int n) const {
    if (!contains(n)) {
        throw WindowError("exponent " + std::to_string(n) + " outside window [" +
                              std::to_string(n_lo()) + ", " + std::to_string(n_hi()) + "]",
                          n);
    }
    return values_[static_cast<std::size_t>(n - n_lo_)];
}

void GridFunction::require(ExponentRange needed, std::string_view who) const {
    if (needed.empty()) return;
    int missing = needed.lo < n_lo() ? needed.lo : needed.hi;
    if (needed.lo < n_lo() || needed.hi > n_hi()) {
        throw WindowError(std::string(who) + ": needs exponents [" + std::to_string(needed.lo) +
                              ", " + std::to_string(needed.hi) + "] but window is [" +
                              std::to_string(n_lo()) + ", " + std::to_string(n_hi()) +
                              "]; missing exponent " + std::to_string(missing),
                          missing);
    }
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction GridFunction::negated() const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return -v; });
    return {n_lo_, std::move(out)};
}

GridFunction GridFunction::restricted(ExponentRange range) const {
    require(range, "restricted");
    auto first = values_.begin() + (range.lo - n_lo_);
    return {range.lo, std::vector<double>(first, first + range.length())};
}

GridFunction GridFunction::extended(double next_value) const {
    std::vector<double> out = values_;
    out.push_back(next_value);
    return {n_lo_, std::move(out)};
}

GridFunction linear_combination(double a, const GridFunction& f, double b, const GridFunction& g) {
    const int lo = std::max(f.n_lo(), g.n_lo());
    const int hi = std::min(f.n_hi(), g.n_hi());
    if (hi < lo) {
        throw WindowError("linear_combination: windows do not overlap", lo);
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int n = lo; n <= hi; ++n) out.push_back(a * f(n) + b * g(n));
    return {lo, std::move(out)};
}

namespace {

struct Evaluator {
    int n;
    double q;

    double operator()(const expr::Constant& c) const { return c.value; }
    double operator()(const expr::Identity&) const { return point_value(n, q); }
    double operator()(const expr::QPower& p) const {
        return q_pow_frac(point_value(n, q), point_value(p.base_exponent, q), p.power, q).value;
    }
    double operator()(const expr::Tabulated& t) const {
        const int k = n - t.n_lo;
        if (k < 0 || k >= static_cast<int>(t.values.size())) {
            throw EvaluationError("tabulated function has no value at exponent " + std::to_string(n),
                                  n);
        }
        return t.values[static_cast<std::size_t>(k)];
    }
    double operator()(const std::function<double(double)>& f) const { return f(point_value(n, q)); }
};

}  // namespace

double evaluate(const FunctionExpr& f, int n, double q) {
    double v;
    try {
        v = std::visit(Evaluator{n, q}, f);
    } catch (const EvaluationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EvaluationError("evaluation failed at exponent " + std::to_string(n) + ": " + e.what(),
                              n);
    }
    if (!std::isfinite(v)) {
        throw EvaluationError("non-finite value at exponent " + std::to_string(n), n);
    }
    return v;
}

GridFunction sample(const FunctionExpr& f, ExponentRange window, const QParams& params) {
    if (window.empty()) {
        throw DomainError("sample: empty window");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(window.length()));
    for (int n = window.lo; n <= window.hi; ++n) values.push_back(evaluate(f, n, params.q()));
    return {window.lo, std::move(values)};
}

}  // namespace qmono
