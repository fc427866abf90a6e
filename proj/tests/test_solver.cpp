#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracmarkov/errors.hpp"
#include "fracmarkov/solver.hpp"
#include "fracmarkov/specfun.hpp"
#include "oracles.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>

using namespace fracmarkov;
namespace bm = boost::math;

namespace {

GeneratorSpec spec_of(JumpKernel k)
{
    GeneratorSpec s;
    s.kernel = std::move(k);
    return s;
}

SimParams params(long n)
{
    SimParams p;
    p.paths = n;
    p.seed = 99;
    return p;
}

JumpKernel mixed(double w1, double b1, double w2, double b2)
{
    std::array<CaputoTerm, 2> terms{CaputoTerm{w1, b1, JumpSide::Negative}, CaputoTerm{w2, b2, JumpSide::Positive}};
    return mixed_caputo(terms);
}

BvpProblem mixed_problem()
{
    BvpProblem p;
    p.spec = spec_of(mixed(1.0, 0.5, 1.0, 0.5));
    p.region = {0.0, 1.0};
    p.lambda = 1.0;
    p.g = ScalarFunction::constant(-1.0);
    return p;
}

std::vector<double> grid11(double a, double b)
{
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i) g.push_back(a + (b - a) * i / 10.0);
    return g;
}

}  // namespace

TEST_CASE("closed form")
{
    auto zero = ScalarFunction::constant(0.0);
    auto t = solve_bvp_closed_form(0.5, 0.0, 1.0, zero, {-1.0, 0.0, 0.5, 1.0});
    CHECK(t.values[0] == 0.0);
    CHECK(t.values[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t.values[2] == doctest::Approx(oracle::exit_prob(0.5, 0.5)).epsilon(1e-9));
    CHECK(t.values[3] == 1.0);
    auto c = solve_bvp_closed_form(0.7, 1.0, 1.0, zero, grid11(-1, 1));
    for (double v : c.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    // g = 1: minus the mean exit time
    for (double beta : {0.5, 1.5})
        for (double x : {0.0, 0.4, -0.8}) {
            auto r = solve_bvp_closed_form(beta, 0.0, 0.0, ScalarFunction::constant(1.0), {x});
            CHECK(r.values[0] == doctest::Approx(-stable_mean_exit_time(beta, x)).epsilon(1e-7));
        }
    // a non-constant source against composite quadrature of the oracle density
    auto g = ScalarFunction([](double y) { return std::cos(y); });
    double x = 0.3;
    auto r = solve_bvp_closed_form(0.5, 0.0, 0.0, g, {x});
    auto h = [&](double y) { return std::abs(y) >= 1.0 || y == x ? 0.0 : std::cos(y) * oracle::occupation_density(0.5, x, y); };
    // graded towards y = x and towards the far end, where the density has a cusp
    auto both = [&](double s, double len) {
        return oracle::graded_left([&](double d) { return h(x + s * d); }, 0.0, 0.5 * len, 120) +
               oracle::graded_left([&](double e) { return h(x + s * (len - e)); }, 0.0, 0.5 * len, 120);
    };
    double ref = both(1.0, 0.7) + both(-1.0, 1.3);
    CHECK(r.values[0] == doctest::Approx(-ref).epsilon(1e-6));
    CHECK_THROWS_AS(solve_bvp_closed_form(0.5, 0, 0, g, {1.5}), DomainError);
}

TEST_CASE("monte carlo representation")
{
    BvpProblem p;
    p.spec = spec_of(stable_symmetric(0.5));
    p.f_b = 1.0;
    auto sp = params(4000);
    auto t = solve_bvp_mc(p, sp, {-1.0, 0.5, 1.0});
    CHECK(t.values[0] == 0.0);
    CHECK(t.values[2] == 1.0);
    CHECK(t.se[0] == 0.0);
    auto e = exit_statistics(p.spec, p.region, BoundaryMode::Stopped, 0.5, sp);
    CHECK(t.values[1] == e.p_right.value);

    p.f_a = p.f_b = 2.5;
    auto c = solve_bvp_mc(p, sp, {-0.5, 0.0, 0.9});
    for (double v : c.values) CHECK(v == 2.5);

    p.f_a = p.f_b = 0.0;
    p.g = ScalarFunction::constant(1.0);
    auto m = solve_bvp_mc(p, sp, {0.0});
    auto cf = solve_bvp_closed_form(0.5, 0.0, 0.0, p.g, {0.0});
    CHECK(m.values[0] == doctest::Approx(-e.mean_exit_time.value).epsilon(0.2));
    CHECK(std::abs(m.values[0] - cf.values[0]) <= 3 * m.se[0]);

    SimParams short_run = sp;
    short_run.t_max = 0.01;
    CHECK_THROWS_AS(solve_bvp_mc(p, short_run, {0.0}), CensoringError);
}

TEST_CASE("collocation: constants and maximum principle")
{
    BvpProblem p;
    p.spec = spec_of(stable_symmetric(0.5));
    p.f_a = p.f_b = 3.0;
    auto t = solve_bvp_collocation(p, 24);
    for (double v : t.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-10));
    p.lambda = 2.0;
    p.g = ScalarFunction::constant(-6.0);
    t = solve_bvp_collocation(p, 24);
    for (double v : t.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-10));

    p.lambda = 0.0;
    p.f_a = -1.0;
    p.f_b = 2.0;
    p.g = ScalarFunction([](double x) { return -1.0 - x * x; });
    t = solve_bvp_collocation(p, 32);
    for (double v : t.values) CHECK(v >= -1.0);

    CHECK_THROWS_AS(solve_bvp_collocation(p, 4), DomainError);
    p.spec = spec_of(stable_symmetric(1.5));
    CHECK_THROWS_AS(solve_bvp_collocation(p, 16), ClassError);
}

TEST_CASE("collocation against the closed form")
{
    BvpProblem p;
    p.spec = spec_of(stable_symmetric(0.5));
    p.f_b = 1.0;
    auto t = solve_bvp_collocation(p, 128);
    auto ref = solve_bvp_closed_form(0.5, 0.0, 1.0, ScalarFunction::constant(0.0), grid11(-1, 1));
    double err = 0;
    for (std::size_t i = 0; i < ref.grid.size(); ++i) err = std::max(err, std::abs(t.value_at(ref.grid[i]) - ref.values[i]));
    MESSAGE("exit probability sup error " << err);
    CHECK(err < 5e-3);

    p.f_b = 0.0;
    p.g = ScalarFunction::constant(1.0);
    t = solve_bvp_collocation(p, 128);
    err = 0;
    for (double x : grid11(-1, 1)) err = std::max(err, std::abs(t.value_at(x) + stable_mean_exit_time(0.5, x)));
    MESSAGE("mean exit time sup error " << err);
    CHECK(err < 5e-3);
}

TEST_CASE("collocation grid refinement and monte carlo agreement")
{
    auto p = mixed_problem();
    auto c64 = solve_bvp_collocation(p, 64);
    auto c128 = solve_bvp_collocation(p, 128);
    double drift = 0;
    for (double x : grid11(0, 1)) drift = std::max(drift, std::abs(c64.value_at(x) - c128.value_at(x)));
    MESSAGE("grid doubling drift " << drift);
    CHECK(drift <= 1e-3);

    auto mc = solve_bvp_mc(p, params(4000), grid11(0, 1));
    for (std::size_t i = 0; i < mc.grid.size(); ++i) {
        double d = std::abs(mc.values[i] - c128.value_at(mc.grid[i]));
        CHECK(d <= 3 * mc.se[i] + 1e-12);
    }
}

TEST_CASE("singular collocation system")
{
    BvpProblem p;
    p.spec = spec_of(no_jumps());
    CHECK_THROWS_AS(solve_bvp_collocation(p, 10), SingularSystemError);
}

TEST_CASE("caputo to riemann-liouville reduction")
{
    BvpProblem p;
    p.spec = spec_of(mixed(1.0, 0.4, 0.5, 0.6));
    p.spec.drift = Drift::function([](double x) { return 0.2 * x; });
    p.region = {0.0, 1.0};
    p.lambda = 0.5;
    p.g = ScalarFunction([](double x) { return std::sin(3 * x) - 1.0; });

    auto same = reduce_caputo_to_rl(p, ScalarFunction::constant(0.0));
    CHECK(same.form == OperatorForm::Killed);
    for (double x : {0.1, 0.5, 0.9}) CHECK(same.g(x) == doctest::Approx(p.g(x)).epsilon(1e-12));

    p.f_a = 0.5;
    p.f_b = -1.0;
    ScalarFunction v([](double x) { return 0.5 - 1.5 * x; });
    v.with_derivative([](double) { return -1.5; }).with_second_derivative([](double) { return 0.0; });
    auto red = reduce_caputo_to_rl(p, v);
    CHECK(red.f_a == 0.0);
    CHECK(red.f_b == 0.0);
    auto direct = solve_bvp_collocation(p, 48);
    auto phi = solve_bvp_collocation(red, 48);
    double err = 0;
    for (std::size_t i = 0; i < direct.grid.size(); ++i)
        err = std::max(err, std::abs(phi.values[i] + v(phi.grid[i]) - direct.values[i]));
    MESSAGE("round trip " << err);
    CHECK(err < 1e-6);

    ScalarFunction wrong([](double x) { return x; });
    CHECK_THROWS_AS(reduce_caputo_to_rl(p, wrong), BoundaryMismatchError);
}

TEST_CASE("relaxation equation")
{
    CHECK(relaxation_solution(0.5, 1.0, 0.0, 2.0, 0.0) == 2.0);
    CHECK(relaxation_solution(0.5, 1.0, 0.0, 1.0, 1.0) == doctest::Approx(oracle::mittag_leffler_series(0.5, -1.0)).epsilon(1e-12));
    for (double x : {0.2, 1.0, 2.5})
        CHECK(std::abs(relaxation_solution(0.999, 1.0, 0.0, 1.0, x) - std::exp(-x)) < 1e-2);
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
        double v = relaxation_solution(0.3, 2.0, 1.0, 1.0, 1.0 + 0.05 * i);
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK_THROWS_AS(relaxation_solution(1.2, 1.0, 0, 1, 1), DomainError);
}

TEST_CASE("regularity probes")
{
    SimParams sp = params(4000);
    auto one = spec_of(stable_one_sided(0.5, JumpSide::Negative));
    auto r = regularity_probe(one, Interval{0.0, kInfinity}, Endpoint::A, {0.4, 0.2, 0.1, 0.05}, sp);
    MESSAGE("one-sided exponent " << r.exponent);
    CHECK(std::abs(r.exponent - 0.5) < 0.1);
    CHECK(r.regular);
    for (std::size_t i = 0; i < r.radii.size(); ++i)
        CHECK(std::abs(r.mean_exit_time[i].value - std::pow(r.radii[i], 0.5) / bm::tgamma(1.5)) <=
              4 * r.mean_exit_time[i].se);

    auto drift = one;
    drift.drift = Drift::constant_value(1.0);
    auto d = regularity_probe(drift, Interval{0.0, 1.0}, Endpoint::B, {0.2, 0.1, 0.05, 0.025}, sp);
    MESSAGE("drift-dominated exponent " << d.exponent);
    CHECK(d.regular);
    CHECK(std::abs(d.exponent - 1.0) < 0.15);

    // the largest order appears on both sides
    std::array<CaputoTerm, 4> terms{CaputoTerm{1.0, 0.3, JumpSide::Negative}, CaputoTerm{0.5, 0.7, JumpSide::Negative},
                                    CaputoTerm{0.5, 0.3, JumpSide::Positive}, CaputoTerm{1.0, 0.7, JumpSide::Positive}};
    auto mix = spec_of(mixed_caputo(terms));
    for (Endpoint e : {Endpoint::A, Endpoint::B}) {
        auto m = regularity_probe(mix, Interval{0.0, 1.0}, e, {0.2, 0.1, 0.05, 0.025}, sp);
        MESSAGE("mixed exponent " << m.exponent);
        CHECK(m.regular);
        CHECK(m.lyapunov.passed);
    }
}
