#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracmarkov/errors.hpp"
#include "fracmarkov/fracops.hpp"
#include "fracmarkov/specfun.hpp"
#include "oracles.hpp"

using namespace fracmarkov;
namespace fm = fracmarkov;

namespace {

ScalarFunction wrap(const oracle::Smooth& s, bool exact)
{
    ScalarFunction f(s.f);
    if (exact) f.with_derivative(s.df).with_second_derivative(s.d2f);
    return f;
}

}  // namespace

TEST_CASE("frac_integral examples")
{
    auto one = ScalarFunction::constant(1.0);
    CHECK(frac_integral(one, 0, 0.5, 1) == doctest::Approx(1 / fm::gamma(1.5)).epsilon(1e-12));
    CHECK(frac_integral(one, 0, 1.0, 2) == doctest::Approx(2.0).epsilon(1e-13));
    ScalarFunction t([](double x) { return x; });
    CHECK(frac_integral(t, 0, 0.5, 1) == doctest::Approx(fm::gamma(2) / fm::gamma(2.5)).epsilon(1e-11));
    // monomial rule I^b t^k = Gamma(k+1)/Gamma(k+1+b) x^(k+b)
    ScalarFunction cube([](double x) { return x * x * x; });
    CHECK(frac_integral(cube, 0, 0.3, 1.7) ==
          doctest::Approx(6 / fm::gamma(4.3) * std::pow(1.7, 3.3)).epsilon(1e-11));
    // Lipschitz only
    ScalarFunction kink([](double x) { return std::abs(x - 0.4); }, Smoothness::Continuous);
    double ref = oracle::composite(
        [](double s) { return std::abs(1 - s * s - 0.4); }, 0, std::sqrt(0.6), 50) +
                 oracle::composite([](double s) { return std::abs(1 - s * s - 0.4); }, std::sqrt(0.6), 1, 50);
    CHECK(frac_integral(kink, 0, 0.5, 1) == doctest::Approx(ref / fm::gamma(1.5)).epsilon(1e-8));
    CHECK_THROWS_AS(frac_integral(one, 1, 0.5, 1), DomainError);
}

TEST_CASE("FracOrder rejects integers and out-of-range orders")
{
    CHECK_THROWS_AS(FracOrder(1.0), DomainError);
    CHECK_THROWS_AS(FracOrder(0.0), DomainError);
    CHECK_THROWS_AS(FracOrder(2.0), DomainError);
    CHECK_NOTHROW(FracOrder(1.5));
}

TEST_CASE("frac_derivative trivial cases")
{
    auto c = ScalarFunction::constant(3.0);
    for (double b : {0.3, 0.7, 1.4}) {
        CHECK(std::abs(frac_derivative(c, 0, FracOrder(b), 0.8, DerivativeKind::Caputo, Side::Right)) < 1e-12);
        CHECK(std::abs(frac_derivative(c, 1, FracOrder(b), 0.2, DerivativeKind::Caputo, Side::Left)) < 1e-12);
    }
    for (double b : {0.3, 0.7}) {
        double x = 0.8;
        CHECK(frac_derivative(c, 0, FracOrder(b), x, DerivativeKind::RiemannLiouville, Side::Right) ==
              doctest::Approx(3 / (fm::gamma(1 - b) * std::pow(x, b))).epsilon(1e-12));
    }
    ScalarFunction lin([](double x) { return x; });
    CHECK(frac_derivative(lin, 0, FracOrder(0.5), 1, DerivativeKind::Caputo, Side::Right) ==
          doctest::Approx(1 / fm::gamma(1.5)).epsilon(1e-11));
    CHECK_THROWS_AS(frac_derivative(lin, 0, FracOrder(0.5), -1, DerivativeKind::Caputo, Side::Right), DomainError);
    CHECK_THROWS_AS(frac_derivative(lin, 0, FracOrder(0.5), 1, DerivativeKind::Caputo, Side::Left), DomainError);
    ScalarFunction c1([](double x) { return x; }, Smoothness::C1);
    CHECK_THROWS_AS(frac_derivative(c1, 0, FracOrder(1.5), 1, DerivativeKind::Caputo, Side::Right),
                    SmoothnessError);
}

TEST_CASE("Caputo singular form matches the definition")
{
    double worst = 0;
    for (double b : {0.3, 0.5, 0.7, 1.3, 1.5, 1.7})
        for (const auto& fn : oracle::smooth_functions())
            for (bool exact : {false, true})
                for (int k = 1; k <= 20; k += 3) {
                    double x = 0.1 * k;
                    auto f = wrap(fn, exact);
                    double r = frac_derivative(f, 0, FracOrder(b), x, DerivativeKind::Caputo, Side::Right);
                    double l = frac_derivative(f, 2.1, FracOrder(b), x, DerivativeKind::Caputo, Side::Left);
                    double rr = oracle::caputo_definition(fn, 0, b, x, true);
                    double lr = oracle::caputo_definition(fn, 2.1, b, x, false);
                    worst = std::max({worst, std::abs(r - rr), std::abs(l - lr)});
                    CAPTURE(fn.name);
                    CAPTURE(b);
                    CAPTURE(x);
                    CHECK(std::abs(r - rr) < 1e-7);
                    CHECK(std::abs(l - lr) < 1e-7);
                }
    MESSAGE("max deviation " << worst);
}

TEST_CASE("RL minus Caputo equals the boundary terms")
{
    for (double b : {0.3, 0.5, 0.7, 1.3, 1.5, 1.7})
        for (const auto& fn : oracle::smooth_functions()) {
            auto f = wrap(fn, false);
            double a = -0.5;
            for (int k = 1; k <= 21; ++k) {
                double x = a + 0.1 * k;
                double len = x - a;
                double diff = frac_derivative(f, a, FracOrder(b), x, DerivativeKind::RiemannLiouville, Side::Right) -
                              frac_derivative(f, a, FracOrder(b), x, DerivativeKind::Caputo, Side::Right);
                double expect = fn.f(a) * std::pow(len, -b) / fm::gamma(1 - b);
                if (b > 1) expect += fn.df(a) * std::pow(len, 1 - b) / fm::gamma(2 - b);
                CHECK(std::abs(diff - expect) < 1e-7);
            }
        }
}

TEST_CASE("left and right derivatives mirror each other")
{
    for (double b : {0.4, 1.6})
        for (const auto& fn : oracle::smooth_functions()) {
            auto f = wrap(fn, false);
            ScalarFunction g([&](double x) { return fn.f(-x); });
            for (double x : {0.2, 0.9, 1.7})
                for (auto kind : {DerivativeKind::Caputo, DerivativeKind::RiemannLiouville}) {
                    double r = frac_derivative(f, 0.1, FracOrder(b), x, kind, Side::Right);
                    double l = frac_derivative(g, -0.1, FracOrder(b), -x, kind, Side::Left);
                    CHECK(std::abs(r - l) < 1e-9 * std::max(1.0, std::abs(r)));
                }
        }
}

TEST_CASE("generator form is the far-anchor limit")
{
    ScalarFunction f([](double x) { return std::exp(-x * x); });
    double g = generator_derivative(f, FracOrder(0.5), 0, Side::Right);
    double c = frac_derivative(f, -50, FracOrder(0.5), 0, DerivativeKind::Caputo, Side::Right);
    CHECK(std::abs(g - c) < 1e-6);
    for (double b : {0.3, 1.5})
        for (double x : {-0.7, 0.0, 1.2}) {
            double gr = generator_derivative(f, FracOrder(b), x, Side::Right);
            double gl = generator_derivative(f, FracOrder(b), x, Side::Left);
            oracle::Smooth s{"g", [](double t) { return std::exp(-t * t); },
                             [](double t) { return -2 * t * std::exp(-t * t); },
                             [](double t) { return (4 * t * t - 2) * std::exp(-t * t); }};
            CHECK(std::abs(gr - oracle::caputo_definition(s, -30, b, x, true)) < 1e-8);
            CHECK(std::abs(gl - oracle::caputo_definition(s, 30, b, x, false)) < 1e-8);
        }
    auto c3 = ScalarFunction::constant(3.0);
    CHECK(std::abs(generator_derivative(c3, FracOrder(0.5), 0.3, Side::Right)) < 1e-12);
    CHECK(std::abs(generator_derivative(c3, FracOrder(1.5), 0.3, Side::Left)) < 1e-12);
}

TEST_CASE("mixed operator")
{
    ScalarFunction f([](double x) { return std::cos(x); });
    std::vector<MixedTerm> one{{1.0, FracOrder(0.5), Side::Right, -1.0}};
    CHECK(mixed_operator(f, one, 0.3) ==
          doctest::Approx(-frac_derivative(f, -1, FracOrder(0.5), 0.3, DerivativeKind::Caputo, Side::Right)));
    std::vector<MixedTerm> two{{1.0, FracOrder(0.5), Side::Right, -1.0}, {1.0, FracOrder(0.5), Side::Left, 1.0}};
    CHECK(mixed_operator(f, two, 0.0) == doctest::Approx(2 * mixed_operator(f, one, 0.0)).epsilon(1e-10));
    auto c = ScalarFunction::constant(2.0);
    CHECK(std::abs(mixed_operator(c, two, 0.4)) < 1e-12);
}
