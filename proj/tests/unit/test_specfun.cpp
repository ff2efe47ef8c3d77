#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "mbfpe/errors.hpp"
#include "mbfpe/quadrature.hpp"
#include "mbfpe/specfun.hpp"

using namespace mbfpe;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// E1(x) = -gamma - ln x - sum_k (-x)^k / (k k!)
double expint_e1(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -x / k;
        sum += term / k;
    }
    return -std::numbers::egamma - std::log(x) - sum;
}

// Connection formula, valid for non-integer b.
double tricomi_from_kummer(double a, double b, double x) {
    using boost::math::hypergeometric_1F1;
    using boost::math::tgamma;
    return tgamma(1.0 - b) / tgamma(a - b + 1.0) * hypergeometric_1F1(a, b, x) +
           tgamma(b - 1.0) / tgamma(a) * std::pow(x, 1.0 - b) * hypergeometric_1F1(a - b + 1.0, 2.0 - b, x);
}

}  // namespace

TEST_CASE("ln_gamma examples") {
    CHECK(std::abs(ln_gamma(1.0)) < 1e-15);
    CHECK(rel(ln_gamma(5.0), std::log(24.0)) < 1e-13);
    CHECK(rel(ln_gamma(0.5), 0.5723649429247001) < 1e-13);
    CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
}

TEST_CASE("ln_gamma against boost over [1e-3, 1e3]") {
    // ln Gamma has zeros at 1 and 2, so the error is scaled by max(1, |ln Gamma|).
    double worst = 0.0;
    for (int i = 0; i <= 3000; ++i) {
        const double x = std::pow(10.0, -3.0 + 6.0 * i / 3000.0);
        const double ref = boost::math::lgamma(x);
        worst = std::max(worst, std::abs(ln_gamma(x) - ref) / std::max(1.0, std::abs(ref)));
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("beta examples") {
    CHECK(rel(beta(1.0, 1.0), 1.0) < 1e-12);
    CHECK(rel(beta(2.0, 2.0), 1.0 / 6.0) < 1e-12);
    CHECK(rel(beta(2.0, 1.5), 4.0 / 15.0) < 1e-12);
    CHECK_THROWS_AS(beta(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(beta(1.0, -2.0), DomainError);
}

TEST_CASE("beta is symmetric") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-6, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double p = u(rng), q = u(rng);
        CHECK(rel(beta(p, q), beta(q, p)) <= 1e-13);
    }
}

TEST_CASE("ln_beta stays finite for large exponents") {
    const double lb = ln_beta(30.0, 25.0);
    const double ref = boost::math::lgamma(30.0) + boost::math::lgamma(25.0) - boost::math::lgamma(55.0);
    CHECK(rel(lb, ref) < 1e-13);
    CHECK(beta(30.0, 25.0) > 0.0);
}

TEST_CASE("kummer_1f1 examples") {
    CHECK(kummer_1f1(2.5, 3.0, 0.0) == 1.0);
    CHECK(rel(kummer_1f1(1.0, 1.0, 2.0), std::exp(2.0)) < 1e-10);
    CHECK(rel(kummer_1f1(1.0, 2.0, 1.0), std::numbers::e - 1.0) < 1e-10);
    CHECK_THROWS_AS(kummer_1f1(1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(kummer_1f1(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("kummer_1f1 against boost for |x| <= 50") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ua(0.01, 5.0), ub(0.1, 10.0), ux(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double a = ua(rng), b = ub(rng), x = ux(rng);
        const double ref = boost::math::hypergeometric_1F1(a, b, x);
        INFO("a=" << a << " b=" << b << " x=" << x);
        CHECK(rel(kummer_1f1(a, b, x), ref) <= 1e-10);
    }
}

TEST_CASE("Kummer transformation holds on random draws") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ua(0.0, 5.0), ux(0.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        const double a = ua(rng);
        const double b = std::uniform_real_distribution<double>(a, 10.0)(rng);
        const double x = ux(rng);
        INFO("a=" << a << " b=" << b << " x=" << x);
        const double lhs = kummer_1f1(a, b, -x) * std::exp(x);
        const double rhs = kummer_1f1(b - a, b, x);
        CHECK(rel(lhs, rhs) <= 1e-9);
        // Both sides also against an outside implementation.
        CHECK(rel(kummer_1f1(a, b, -x), boost::math::hypergeometric_1F1(a, b, -x)) <= 1e-9);
    }
}

TEST_CASE("tricomi_u examples") {
    for (double x : {0.5, 1.0, 2.0}) CHECK(rel(tricomi_u(1.0, 2.0, x), 1.0 / x) <= 1e-9);
    CHECK(rel(tricomi_u(1.0, 1.0, 1.0), std::numbers::e * expint_e1(1.0)) <= 1e-9);
    CHECK(rel(tricomi_u(1.0, 1.0, 1.0), 0.596347362323194) <= 1e-9);
    // U(1/2, 1, 2s) = e^s K0(s) / sqrt(pi)
    const double k0 = boost::math::cyl_bessel_k(0.0, 0.5);
    CHECK(rel(tricomi_u(0.5, 1.0, 1.0), std::exp(0.5) * k0 / std::sqrt(std::numbers::pi)) <= 1e-9);
    CHECK_THROWS_AS(tricomi_u(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(tricomi_u(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("tricomi_u matches direct quadrature of its integrand") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ua(0.1, 5.0), ub(-2.0, 5.0), ux(0.1, 20.0);
    for (int i = 0; i < 50; ++i) {
        const double a = ua(rng), b = ub(rng), x = ux(rng);
        const auto g = [&](double t) { return std::exp(-x * t) * std::pow(t, a - 1.0) * std::pow(1.0 + t, b - a - 1.0); };
        QuadratureOptions opts;
        opts.rel_tol = 1e-14;
        opts.half_line_scale = 1.0 / x;
        opts.max_panels = 20000;
        const QuadratureResult r = integrate_adaptive(g, 0.0, INFINITY, 0.0, opts);
        const double oracle = r.value / std::tgamma(a);
        INFO("a=" << a << " b=" << b << " x=" << x);
        CHECK(rel(tricomi_u(a, b, x), oracle) <= 1e-9);
    }
}

TEST_CASE("tricomi_u against the Kummer connection formula") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> ua(0.1, 4.0), ub(0.1, 3.0), ux(0.1, 5.0);
    int done = 0;
    while (done < 50) {
        const double a = ua(rng), b = ub(rng), x = ux(rng);
        if (std::abs(b - std::round(b)) < 0.05) continue;
        ++done;
        INFO("a=" << a << " b=" << b << " x=" << x);
        CHECK(rel(tricomi_u(a, b, x), tricomi_from_kummer(a, b, x)) <= 1e-8);
    }
}

TEST_CASE("whittaker_w") {
    // W_{0,1/2}(x) = e^{-x/2}
    for (double x : {0.3, 1.0, 4.0}) CHECK(rel(whittaker_w(0.0, 0.5, x), std::exp(-0.5 * x)) <= 1e-9);
    // even in mu
    CHECK(rel(whittaker_w(0.25, -1.3, 0.7), whittaker_w(0.25, 1.3, 0.7)) <= 1e-14);
    // W_{-1/2,0}(x) = e^{x/2} x^{1/2} E1(x)
    const double x = 1.5;
    CHECK(rel(whittaker_w(-0.5, 0.0, x), std::exp(0.5 * x) * std::sqrt(x) * expint_e1(x)) <= 1e-9);
}
