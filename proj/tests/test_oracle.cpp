#include <doctest.h>

#include <cmath>
#include <set>

#include "qmono/errors.hpp"
#include "qmono/frac.hpp"
#include "qmono/monotone.hpp"
#include "qmono/mvt.hpp"
#include "qmono/oracle.hpp"
#include "qmono/random.hpp"

using namespace qmono;
namespace o = qmono::oracle;

namespace {

double rel_diff(double main, double ref) { return std::abs(main - ref) / std::max(std::abs(ref), 1e-300); }

}  // namespace

TEST_CASE("SplitMix64 reference stream") {
    // First outputs for seed 0.
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next() == 0x06C45D188009454FULL);
    SplitMix64 u(42);
    for (int k = 0; k < 1000; ++k) {
        const double a = u.uniform01();
        CHECK(a >= 0.0);
        CHECK(a < 1.0);
        const double b = u.uniform_pos();
        CHECK(b > 0.0);
        CHECK(b <= 1.0);
    }
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
}

TEST_CASE("OracleConfig") {
    CHECK(o::OracleConfig().tighter_than(QPowerConfig()));
    CHECK_THROWS_AS(o::OracleConfig(1e-6), DomainError);
    CHECK_THROWS_AS(o::OracleConfig(1e-18, 10), DomainError);
    CHECK_FALSE(o::OracleConfig(1e-8).tighter_than(QPowerConfig(1e-9)));
}

TEST_CASE("Neumaier summation keeps small terms") {
    o::NeumaierSum s;
    s.add(1.0);
    s.add(1e100);
    s.add(1.0);
    s.add(-1e100);
    CHECK(s.value() == 2.0);
}

TEST_CASE("trivial oracle values") {
    CHECK(o::q_pow_frac(2.0, 0.0, 0.5, 0.5) == std::sqrt(2.0));
    CHECK(q_pow_frac(2.0, 0.0, 0.5, 0.5).value == std::sqrt(2.0));
    for (double q : {0.3, 0.5, 0.9}) CHECK(o::q_gamma(1.0, q) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(o::q_gamma(-1.0, 0.5), PoleError);
    CHECK_THROWS_AS(o::q_pow_frac(1.0, 2.0, 0.5, 0.5), DomainError);
}

TEST_CASE("main path agrees with the oracle") {
    SplitMix64 rng(2024);
    const double qs[] = {0.3, 0.5, 0.9};
    double worst_pow = 0, worst_gamma = 0, worst_int = 0, worst_rl = 0;
    for (int k = 0; k < 1000; ++k) {
        const double q = qs[k % 3];
        const double alpha = rng.uniform(0.05, 0.95);
        const int m = 1 + static_cast<int>(rng.next() % 20);
        const double power = rng.uniform(-0.95, 2.5);
        const double t = point_value(static_cast<int>(rng.next() % 7) - 3, q);
        worst_pow = std::max(worst_pow, rel_diff(q_pow_frac(t, t * std::pow(q, m), power, q).value,
                                                 o::q_pow_frac(t, t * std::pow(q, m), power, q)));
        const double x = rng.uniform(0.05, 4.0);
        worst_gamma = std::max(worst_gamma, rel_diff(q_gamma(x, q).value, o::q_gamma(x, q)));

        const int width = 2 + static_cast<int>(rng.next() % 10);
        GridFunction f = o::sample_random_grid_function({0, width}, o::Distribution::Uniform, rng.next());
        const int nt = static_cast<int>(rng.next() % width);
        const QParams p(q, alpha);
        worst_int = std::max(worst_int, rel_diff(q_frac_integral(f, width, nt, p), o::frac_integral(f, width, nt, p)));
        worst_rl = std::max(worst_rl, rel_diff(rl_q_derivative(f, width, nt, p), o::rl_derivative(f, width, nt, p)));
    }
    MESSAGE("worst rel diff: pow " << worst_pow << " gamma " << worst_gamma << " int " << worst_int << " rl "
                                   << worst_rl);
    CHECK(worst_pow < 1e-11);
    CHECK(worst_gamma < 1e-11);
    CHECK(worst_int < 1e-11);
    CHECK(worst_rl < 1e-11);
}

TEST_CASE("composition constant matches the main path") {
    for (double q : {0.3, 0.5, 0.9}) {
        for (double alpha : {0.1, 0.5, 0.9}) {
            for (int nb = 0; nb < 4; ++nb) {
                CHECK(rel_diff(m_q(6, nb, QParams(q, alpha)), o::composition_constant(6, nb, QParams(q, alpha))) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("random grid functions") {
    const ExponentRange w{-2, 9};
    using o::Distribution;
    for (std::uint64_t seed : {1ULL, 42ULL, 0xDEADBEEFULL}) {
        GridFunction inc = o::sample_random_grid_function(w, Distribution::Increasing, seed);
        CHECK(inc == o::sample_random_grid_function(w, Distribution::Increasing, seed));
        for (int n = w.lo + 1; n <= w.hi; ++n) CHECK(inc(n - 1) > inc(n));
        CHECK(inc(w.hi) > 0.0);
        CHECK(o::sample_random_grid_function(w, Distribution::Decreasing, seed) == inc.negated());
        GridFunction uni = o::sample_random_grid_function(w, Distribution::Uniform, seed);
        for (double v : uni.values()) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
        CHECK(o::sample_random_grid_function(w, Distribution::Spiky, seed).size() == 12);
    }
    CHECK(o::parse_distribution("spiky") == Distribution::Spiky);
    CHECK(o::to_string(Distribution::Increasing) == "increasing");
    CHECK_THROWS_AS(o::parse_distribution("gaussian"), DomainError);
}

TEST_CASE("golden random values") {
    // Pins the documented draw order: the first uniform value is -1 + 2 * uniform01().
    SplitMix64 rng(7);
    const double first = rng.uniform(-1.0, 1.0);
    CHECK(o::sample_random_grid_function({3, 5}, o::Distribution::Uniform, 7)(3) == first);
    SplitMix64 rng2(7);
    const double top = rng2.uniform_pos();
    CHECK(o::sample_random_grid_function({3, 5}, o::Distribution::Increasing, 7)(5) == top);
}

TEST_CASE("construction from a prescribed derivative") {
    for (double q : {0.3, 0.5, 0.9}) {
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const QParams p(q, alpha);
            GridFunction zero(0, std::vector<double>(6, 0.0));
            GridFunction f0 = o::construct_from_derivative(zero, 0.0, 6, p);
            for (double v : f0.values()) CHECK(v == 0.0);
            GridFunction f1 = o::construct_from_derivative(zero, 1.0, 6, p);
            CHECK(f1(6) == 1.0);
            for (int n = 0; n < 6; ++n) {
                const double expected = alpha < 1.0 ? m_q(6, n, p) : 1.0;
                CHECK(rel_diff(f1(n), expected) < 1e-12);
                CHECK(std::abs(rl_q_derivative(f1, 6, n, p)) < 1e-9);
            }
            GridFunction g = o::sample_random_grid_function({0, 5}, o::Distribution::Uniform, 5);
            GridFunction f = o::construct_from_derivative(g, 0.3, 6, p);
            for (int n = 0; n < 6; ++n) CHECK(std::abs(rl_q_derivative(f, 6, n, p) - g(n)) < 1e-9);
        }
    }
}

TEST_CASE("generated instances satisfy the first monotonicity theorem") {
    GridFunction y = o::generate_thm1_instance(6, 1, QParams(0.5, 0.5), 42);
    CHECK(y.n_lo() == 1);
    CHECK(y.n_hi() == 6);
    MonotonicityReport r = verify_thm1(y, 6, QParams(0.5, 0.5));
    CHECK(r.hypotheses_hold);
    CHECK(r.conclusion_holds);
    CHECK(y == o::generate_thm1_instance(6, 1, QParams(0.5, 0.5), 42));
    CHECK_THROWS_AS(o::generate_thm1_instance(3, 3, QParams(0.5, 0.5), 1), DomainError);
}
