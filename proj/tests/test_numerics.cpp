#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "macro/errors.hpp"
#include "macro/numerics.hpp"

#include <cmath>

using namespace macro;

TEST_CASE("erf values and symmetry")
{
    CHECK(macro::erf(0.0) == 0.0);
    CHECK(std::abs(macro::erf(6.0) - 1.0) < 1e-15);
    CHECK(macro::erf(1.0) == doctest::Approx(0.8427007929).epsilon(1e-10));

    // Maclaurin series as an independent oracle at moderate x
    for (double x : {0.1, 0.5, 1.0, 1.7}) {
        double term = x, sum = x;
        for (int n = 1; n < 60; ++n) {
            term *= -x * x / n;
            sum += term / (2 * n + 1);
        }
        CHECK(macro::erf(x) == doctest::Approx(2.0 / std::sqrt(M_PI) * sum).epsilon(1e-13));
    }

    Rng r = make_rng(7, 0);
    for (int i = 0; i < 1000; ++i) {
        double x = gen::uniform(r, -8.0, 8.0);
        CHECK(macro::erf(-x) == -macro::erf(x));
        CHECK(std::abs(macro::erf(x)) <= 1.0);
    }
}

TEST_CASE("sinc convention sin(x)/x")
{
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(0.3 * M_PI) == doctest::Approx(0.8584).epsilon(1e-4));
    CHECK(std::abs(sinc(M_PI)) < 1e-15);
    Rng r = make_rng(8, 0);
    for (int i = 0; i < 1000; ++i) {
        double x = gen::uniform(r, -50.0, 50.0);
        CHECK(sinc(-x) == sinc(x));
        CHECK(std::abs(sinc(x)) <= 1.0);
    }
}

TEST_CASE("scaled modified Bessel functions")
{
    CHECK(bessel_i0e(0.0) == 1.0);
    CHECK(bessel_i1e(0.0) == 0.0);
    CHECK_THROWS_AS(bessel_i0e(-1.0), DomainError);
    CHECK_THROWS_AS(bessel_i1e(-1.0), DomainError);

    // trapezoid rule on the periodic integral representation converges geometrically
    auto i0e_trap = [](double x) {
        const int n = 4000;
        double s = 0.5 * (1.0 + std::exp(-2.0 * x));
        for (int k = 1; k < n; ++k) s += std::exp(x * (std::cos(M_PI * k / n) - 1.0));
        return s / n;
    };
    CHECK(bessel_i0e(50.0) == doctest::Approx(i0e_trap(50.0)).epsilon(1e-10));
    CHECK(bessel_i0e(2.5) == doctest::Approx(i0e_trap(2.5)).epsilon(1e-10));

    double prev0 = bessel_i0e(2.0), prev1 = bessel_i1e(2.0);  // i1e peaks near x = 1.5
    for (double x = 3.0; x < 1e7; x *= 1.5) {
        double a = bessel_i0e(x), b = bessel_i1e(x);
        CHECK(a < prev0);
        CHECK(b < prev1);
        CHECK(b < a);
        CHECK(std::isfinite(a));
        prev0 = a;
        prev1 = b;
    }
    CHECK(bessel_i1e(0.3) < bessel_i0e(0.3));
}

TEST_CASE("integrate_1d")
{
    auto r = integrate_1d([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(std::abs(r.value - 2.0) < 1e-10);
    CHECK(r.abs_error_estimate >= 0.0);
    CHECK(r.evaluations >= 1);

    auto g = integrate_1d([](double x) { return std::exp(-x * x); }, 0.0, 40.0, 1e-12);
    CHECK(std::abs(g.value - std::sqrt(M_PI) / 2.0) < 1e-9);

    // polynomials up to degree 5 are integrated exactly
    Rng rng = make_rng(9, 0);
    for (int trial = 0; trial < 50; ++trial) {
        double c[6];
        for (double& x : c) x = gen::uniform(rng, -2.0, 2.0);
        double a = gen::uniform(rng, -3.0, 0.0), b = gen::uniform(rng, 0.5, 3.0);
        auto poly = [&](double x) {
            double s = 0.0;
            for (int k = 5; k >= 0; --k) s = s * x + c[k];
            return s;
        };
        double exact = 0.0;
        for (int k = 0; k < 6; ++k) exact += c[k] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
        double got = integrate_1d(poly, a, b, 1e-13).value;
        CHECK(std::abs(got - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("integrate_1d reports non-convergence with the best estimate")
{
    QuadOptions o;
    o.rel_tol = 1e-14;
    o.max_intervals = 3;
    try {
        integrate_1d([](double x) { return std::sin(1.0 / (x + 1e-4)); }, 0.0, 1.0, o);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_estimate));
    }
}

TEST_CASE("integrate_nd")
{
    auto one = integrate_nd([](std::span<const double>) { return 1.0; }, {{0, 1}, {0, 1}, {0, 1}});
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));

    double s = 0.7;
    auto gauss3 = integrate_nd(
        [&](std::span<const double> v) {
            double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            return std::exp(-0.5 * r2 / (s * s)) / std::pow(2.0 * M_PI * s * s, 1.5);
        },
        {{-8 * s, 8 * s}, {-8 * s, 8 * s}, {-8 * s, 8 * s}}, 1e-8);
    CHECK(std::abs(gauss3.value - 1.0) < 1e-6);

    CHECK_THROWS_AS(integrate_nd([](std::span<const double>) { return 1.0; }, {{0, 1}}), DomainError);
    CHECK_THROWS_AS(integrate_nd([](std::span<const double> v) { return std::sin(1.0 / (v[0] + 1e-6)); },
                                 {{0, 1}, {0, 1}}, 1e-12, 50),
                    ConvergenceError);
}

TEST_CASE("mc_integrate")
{
    auto c = mc_integrate([](Rng&) { return 1.0; }, 5000, 3);
    CHECK(c.mean == 1.0);
    CHECK(c.std_error == 0.0);
    CHECK(c.samples == 5000);

    double sigma = 2.5;
    auto m2 = mc_integrate(
        [&](Rng& r) {
            double x = std::normal_distribution<double>(0.0, sigma)(r);
            return x * x;
        },
        200000, 4);
    CHECK(std::abs(m2.mean - sigma * sigma) <= 3.0 * m2.std_error);

    // characteristic function of the momentum kick at dx = hbar / sigma_q
    auto cf = mc_integrate(
        [](Rng& r) {
            double u = std::normal_distribution<double>(0.0, 1.0)(r);
            return std::cos(u);
        },
        200000, 5);
    CHECK(std::abs(cf.mean - std::exp(-0.5)) <= 3.0 * cf.std_error);

    CHECK_THROWS_AS(mc_integrate([](Rng&) { return 1.0; }, 99, 1), DomainError);
}

TEST_CASE("mc_integrate is reproducible per seed")
{
    auto f = [](Rng& r) { return std::uniform_real_distribution<double>(0.0, 1.0)(r); };
    auto a = mc_integrate(f, 10000, 11), b = mc_integrate(f, 10000, 11), c = mc_integrate(f, 10000, 12);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean != c.mean);
    CHECK(a.seed == 11);
}
