#include "qmono/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmono/errors.hpp"
#include "qmono/frac.hpp"

namespace qmono {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Running minimum with the exponent where it was first reached.
struct MinTracker {
    double value = kInf;
    std::optional<int> at;

    void offer(double v, int n) {
        if (v < value) {
            value = v;
            at = n;
        }
    }
};

void require_monotone_order(const QParams& params) {
    const double alpha = params.alpha();
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw OrderError("monotonicity results need order in (0, 1], got " + std::to_string(alpha));
    }
}

int checked_n_min(const GridFunction& y, int n0, int extra_hi, const char* who) {
    const int n_min = y.n_lo();
    if (n_min >= n0) {
        throw DomainError(std::string(who) + ": window must start below n0 = " + std::to_string(n0));
    }
    y.require({n_min, n0 + extra_hi}, who);
    return n_min;
}

MinTracker rl_values(const GridFunction& y, int n0, int n_min, const QParams& params,
                     const QPowerConfig& cfg, double sign) {
    const RlDerivative rl(params, n0 - n_min + 1, cfg);
    MinTracker t;
    for (int n = n_min; n < n0; ++n) t.offer(sign * rl(y, n0, n), n);
    return t;
}

}  // namespace

double c_q(double alpha, double q) {
    if (!(alpha >= 0.0)) throw DomainError("c_q needs alpha >= 0");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("c_q needs q in (0, 1)");
    return q_bracket(alpha, q) * std::pow(q, 1.0 - alpha);
}

double SignTolerance::for_function(const GridFunction& y) const {
    return rel * std::max(1.0, y.max_abs());
}

MarginCheck is_cq_increasing(const GridFunction& y, ExponentRange range, const QParams& params,
                             double tau) {
    y.require(range, "is_cq_increasing");
    const double c = c_q(params.alpha(), params.q());
    MinTracker t;
    for (int n = range.lo + 1; n <= range.hi; ++n) t.offer(y(n - 1) - c * y(n), n);
    return {t.value >= -tau, t.value, t.at};
}

MarginCheck is_cq_decreasing(const GridFunction& y, ExponentRange range, const QParams& params,
                             double tau) {
    y.require(range, "is_cq_decreasing");
    const double c = c_q(params.alpha(), params.q());
    MinTracker t;
    for (int n = range.lo + 1; n <= range.hi; ++n) t.offer(c * y(n) - y(n - 1), n);
    return {t.value >= -tau, t.value, t.at};
}

double cq_chain_margin(const GridFunction& y, int n0, int n_min, const QParams& params) {
    y.require({n_min, n0}, "cq_chain_margin");
    const double c = c_q(params.alpha(), params.q());
    double worst = kInf;
    double ck = 1.0;
    for (int k = 1; k <= n0 - n_min; ++k) {
        ck *= c;
        worst = std::min(worst, y(n0 - k) - ck * y(n0));
    }
    return worst;
}

std::string_view to_string(TheoremId id) {
    switch (id) {
        case TheoremId::Thm1: return "THM1";
        case TheoremId::Converse: return "THM_CONVERSE";
        case TheoremId::Strict: return "THM_STRICT";
        case TheoremId::Decreasing1: return "THM_DEC1";
        case TheoremId::Decreasing2: return "THM_DEC2";
        case TheoremId::Corollary: return "COROLLARY";
    }
    return "UNKNOWN";
}

TheoremId parse_theorem_id(std::string_view name) {
    for (TheoremId id : {TheoremId::Thm1, TheoremId::Converse, TheoremId::Strict,
                         TheoremId::Decreasing1, TheoremId::Decreasing2, TheoremId::Corollary}) {
        if (name == to_string(id)) return id;
    }
    throw DomainError("unknown theorem id '" + std::string(name) + "'");
}

double MonotonicityReport::worst_margin() const {
    return std::min(hypothesis_margin, conclusion_margin);
}

MonotonicityReport verify_thm1(const GridFunction& y, int n0, const QParams& params,
                               const QPowerConfig& cfg, SignTolerance tol) {
    require_monotone_order(params);
    const int n_min = checked_n_min(y, n0, 0, "verify_thm1");
    const double tau = tol.for_function(y);

    MinTracker hyp = rl_values(y, n0, n_min, params, cfg, 1.0);
    hyp.offer(y(n0), n0);
    const MarginCheck concl = is_cq_increasing(y, {n_min, n0}, params, tau);

    MonotonicityReport r;
    r.theorem = TheoremId::Thm1;
    r.hypotheses_hold = hyp.value >= -tau;
    r.hypothesis_margin = hyp.value;
    r.hypothesis_witness = hyp.at;
    r.conclusion_holds = concl.holds;
    r.conclusion_margin = concl.worst_margin;
    r.witness_exponent = concl.witness;
    return r;
}

MonotonicityReport verify_converse(const GridFunction& y, int n0, const QParams& params, bool strict,
                                   const QPowerConfig& cfg, SignTolerance tol) {
    require_monotone_order(params);
    const int n_min = checked_n_min(y, n0, 0, "verify_converse");
    const double tau = tol.for_function(y);

    MinTracker hyp;
    for (int n = n_min + 1; n <= n0; ++n) hyp.offer(y(n - 1) - y(n), n);
    hyp.offer(y(n0), n0);
    const MinTracker deriv = rl_values(y, n0, n_min, params, cfg, 1.0);

    MonotonicityReport r;
    r.theorem = strict ? TheoremId::Strict : TheoremId::Converse;
    r.hypotheses_hold = strict ? hyp.value > tau : hyp.value >= -tau;
    r.hypothesis_margin = hyp.value;
    r.hypothesis_witness = hyp.at;
    r.conclusion_holds = strict ? deriv.value > tau : deriv.value >= -tau;
    r.conclusion_margin = deriv.value;
    r.witness_exponent = deriv.at;
    return r;
}

MonotonicityReport verify_corollary(const GridFunction& y, int n0, const QParams& params,
                                    const QPowerConfig& cfg, SignTolerance tol) {
    require_monotone_order(params);
    const int n_min = checked_n_min(y, n0, 1, "verify_corollary");
    const double tau = tol.for_function(y);
    const double q = params.q();
    const double alpha = params.alpha();
    const int n_start = n0 + 1;

    MinTracker hyp;
    double residual = 0.0;
    if (alpha < 1.0) {
        const double inv_gamma = 1.0 / q_gamma(1.0 - alpha, q, cfg).value;
        const double qa = point_value(n_start, q);
        for (int n = n_min; n < n0; ++n) {
            const double caputo = caputo_q_derivative(y, n_start, n, params, cfg);
            const double bound = -q_pow_frac(point_value(n, q), qa, -alpha, q, cfg).value *
                                 inv_gamma * y(n_start);
            hyp.offer(caputo - bound, n);
            residual = std::max(residual, caputo_rl_relation_residual(y, n_start, n, params, cfg));
        }
    } else {
        for (int n = n_min; n < n0; ++n) hyp.offer(caputo_q_derivative(y, n_start, n, params, cfg), n);
    }
    hyp.offer(y(n0), n0);
    const MarginCheck concl = is_cq_increasing(y, {n_min, n0}, params, tau);
    const MonotonicityReport rl = verify_thm1(y.restricted({n_min, n0}), n0, params, cfg, tol);

    MonotonicityReport r;
    r.theorem = TheoremId::Corollary;
    r.hypotheses_hold = hyp.value >= -tau;
    r.hypothesis_margin = hyp.value;
    r.hypothesis_witness = hyp.at;
    r.conclusion_holds = concl.holds;
    r.conclusion_margin = concl.worst_margin;
    r.witness_exponent = concl.witness;
    r.consistency_residual = residual;
    r.hypotheses_agree = rl.hypotheses_hold == r.hypotheses_hold;
    return r;
}

MonotonicityReport verify_decreasing(const GridFunction& y, int n0, const QParams& params,
                                     DecreasingDirection direction, const QPowerConfig& cfg,
                                     SignTolerance tol) {
    require_monotone_order(params);
    const int n_min = checked_n_min(y, n0, 0, "verify_decreasing");
    const double tau = tol.for_function(y);

    MonotonicityReport r;
    r.theorem = direction == DecreasingDirection::FromDerivative ? TheoremId::Decreasing1
                                                                 : TheoremId::Decreasing2;
    if (direction == DecreasingDirection::FromDerivative) {
        MinTracker hyp = rl_values(y, n0, n_min, params, cfg, -1.0);
        hyp.offer(-y(n0), n0);
        const MarginCheck concl = is_cq_decreasing(y, {n_min, n0}, params, tau);
        r.hypotheses_hold = hyp.value >= -tau;
        r.hypothesis_margin = hyp.value;
        r.hypothesis_witness = hyp.at;
        r.conclusion_holds = concl.holds;
        r.conclusion_margin = concl.worst_margin;
        r.witness_exponent = concl.witness;
    } else {
        MinTracker hyp;
        for (int n = n_min + 1; n <= n0; ++n) hyp.offer(y(n) - y(n - 1), n);
        hyp.offer(-y(n0), n0);
        const MinTracker deriv = rl_values(y, n0, n_min, params, cfg, -1.0);
        r.hypotheses_hold = hyp.value >= -tau;
        r.hypothesis_margin = hyp.value;
        r.hypothesis_witness = hyp.at;
        r.conclusion_holds = deriv.value >= -tau;
        r.conclusion_margin = deriv.value;
        r.witness_exponent = deriv.at;
    }
    return r;
}

}  // namespace qmono
