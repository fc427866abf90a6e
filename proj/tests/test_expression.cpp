#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracmarkov/errors.hpp"
#include "fracmarkov/expression.hpp"

#include <cmath>

using namespace fracmarkov;

TEST_CASE("evaluation and precedence")
{
    CHECK(Expression::parse("1 + 2*3")(0.0) == 7.0);
    CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
    CHECK(Expression::parse("-2^2")(0.0) == -4.0);
    CHECK(Expression::parse("(-2)^2")(0.0) == 4.0);
    CHECK(Expression::parse("8/4/2")(0.0) == 1.0);
    CHECK(Expression::parse("2*-x")(3.0) == -6.0);
    CHECK(Expression::parse("x^-1")(4.0) == 0.25);
    CHECK(Expression::parse("exp(-x^2)")(1.5) == doctest::Approx(std::exp(-2.25)).epsilon(1e-15));
    CHECK(Expression::parse("pow(abs(x), 1.5)")(-4.0) == doctest::Approx(8.0));
    CHECK(Expression::parse("min(x, 1, 3)")(2.0) == 1.0);
    CHECK(Expression::parse("max(x, 1)")(2.0) == 2.0);
    CHECK(Expression::parse("indicator(x)")(0.0) == 0.0);
    CHECK(Expression::parse("indicator(x)")(1e-300) == 1.0);
    CHECK(Expression::parse("indicator(x, -1, 1)")(1.0) == 1.0);
    CHECK(Expression::parse("indicator(x, -1, 1)")(1.5) == 0.0);
    CHECK(Expression::parse("sin(pi/2) + cos(0) + log(1) + sqrt(4)")(0.0) == doctest::Approx(4.0));
    CHECK(Expression::parse("1.5e-3")(0.0) == 1.5e-3);
    CHECK(std::isinf(Expression::parse("1e999")(0.0)));

    auto k = Expression::parse("abs(y)^(-1.5) * (1 + x)", {"x", "y"});
    CHECK(k(1.0, -4.0) == doctest::Approx(2.0 / 8.0));
    CHECK(k.depends_on(0));
    CHECK(k.depends_on(1));
    CHECK(!Expression::parse("2*3").depends_on(0));
    CHECK(Expression::parse("2*3").is_constant());
}

TEST_CASE("parse errors")
{
    for (const char* bad : {"", "1 +", "(x", "x)", "foo(x)", "y", "exp()", "pow(x)", "min(x)", "2 $ 3", "exp x",
                            "indicator(x,1,2,3)"})
        CHECK_THROWS_AS(Expression::parse(bad), ConfigError);
}

TEST_CASE("normalized text is a fixed point")
{
    for (const char* src : {"1+2*3", "x - (y - 1)", "-x^2", "(-x)^2", "x^y^2", "(x^y)^2", "x/(2*y)", "-(x*y)",
                            "a + -b", "--x", "0.1*x", "pow(x, 2) - min(x, y, 3)", "indicator(x - 1, 0, 2)",
                            "exp(-x^2/2)/sqrt(2*pi)", "x*-2", "1e999 - x", "2^-x"}) {
        auto e = Expression::parse(src, {"x", "y", "a", "b"});
        auto s = e.str();
        auto again = Expression::parse(s, {"x", "y", "a", "b"});
        CHECK_MESSAGE(again.str() == s, src << " -> " << s);
        for (double x : {0.3, -1.7})
            for (double y : {0.5, 2.0}) {
                std::array<double, 4> v{x, y, 1.25, -0.5};
                double p = e.eval(v), q = again.eval(v);
                CHECK_MESSAGE((p == q || (std::isnan(p) && std::isnan(q))), src);
            }
    }
    CHECK(Expression::parse("1 + 2*x").str() == "1 + 2*x");
}

TEST_CASE("symbolic derivatives against central differences")
{
    for (const char* src : {"exp(-x^2)", "sin(3*x)*cos(x)", "x^3 - 2*x + 1", "sqrt(1 + x^2)", "log(2 + x)/(1 + x^2)",
                            "pow(1 + x^2, 0.75)", "2^x", "x^x"}) {
        auto e = Expression::parse(src);
        auto d = e.derivative();
        auto d2 = d.derivative();
        for (double x : {0.3, 0.9, 1.7}) {
            const double h = 1e-4;
            double fd = (e(x - 2 * h) - 8 * e(x - h) + 8 * e(x + h) - e(x + 2 * h)) / (12 * h);
            double fd2 = (d(x - 2 * h) - 8 * d(x - h) + 8 * d(x + h) - d(x + 2 * h)) / (12 * h);
            CHECK_MESSAGE(d(x) == doctest::Approx(fd).epsilon(1e-9), src);
            CHECK_MESSAGE(d2(x) == doctest::Approx(fd2).epsilon(1e-8), src);
        }
    }
    CHECK_THROWS_AS(Expression::parse("abs(x)").derivative(), DomainError);

    auto f = to_function(Expression::parse("exp(-x^2)"));
    CHECK(f.smoothness() == Smoothness::C2);
    CHECK(f.has_derivative());
    CHECK(f.derivative(1.0) == doctest::Approx(-2 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(f.second_derivative(0.0) == doctest::Approx(-2.0).epsilon(1e-14));
    auto g = to_function(Expression::parse("abs(x)"));
    CHECK(g.smoothness() == Smoothness::Continuous);
    CHECK(!g.has_derivative());
}
