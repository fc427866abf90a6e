#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracmarkov/errors.hpp"
#include "fracmarkov/montecarlo.hpp"
#include "fracmarkov/specfun.hpp"
#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

using namespace fracmarkov;
namespace bm = boost::math;

namespace {

GeneratorSpec spec_of(JumpKernel k, Mollifier m = Mollifier::Indicator)
{
    GeneratorSpec s;
    s.kernel = std::move(k);
    s.mollifier = m;
    return s;
}

GeneratorSpec drift_only(double g)
{
    GeneratorSpec s = spec_of(no_jumps());
    s.drift = Drift::constant_value(g);
    return s;
}

SimParams params(long n, double h = 1e-3)
{
    SimParams p;
    p.paths = n;
    p.h = h;
    p.seed = 20261016;
    return p;
}

bool within(const Estimate& e, double ref, double k = 3.0) { return std::abs(e.value - ref) <= k * e.se; }

// CDF at time t of the symmetric stable process with |y| <= h jumps removed,
// by Gil-Pelaez inversion in k = u^2.
struct TruncatedStableCdf {
    double beta, h, t, c;
    TruncatedStableCdf(double b, double h_, double t_)
        : beta(b), h(h_), t(t_), c(1.0 / (-2.0 * bm::tgamma(-b) * std::cos(M_PI * b / 2)))
    {
    }

    // 2c int_0^h (1 - cos kz) z^{-1-beta} dz by its power series
    double removed(double k) const
    {
        double sum = 0, term = 1;
        for (int n = 1; n < 200; ++n) {
            term *= (k * h) * (k * h) / ((2.0 * n - 1) * (2.0 * n));
            double piece = term * std::pow(h, -beta) / (2.0 * n - beta);
            sum += (n % 2 ? piece : -piece);
            if (std::abs(piece) < 1e-18 * std::abs(sum)) break;
        }
        return 2 * c * sum;
    }

    double phi(double k) const { return std::exp(-t * (std::pow(k, beta) - removed(k))); }

    // u nodes, weights times phi(u^2)/u, tabulated once for all x
    std::vector<double> u, wphi;

    void tabulate()
    {
        const auto& rule = oracle::gl();
        double umax = std::pow(40.0 / t, 1.0 / (2 * beta)), width = 2e-3;
        for (double u0 = 0; u0 < umax; u0 += width)
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                double v = u0 + 0.5 * width * (rule.x[i] + 1);
                u.push_back(v);
                wphi.push_back(0.5 * width * rule.w[i] * 2.0 * phi(v * v) / v);
            }
    }

    double operator()(double x)
    {
        if (u.empty()) tabulate();
        double total = 0;
        for (std::size_t i = 0; i < u.size(); ++i) total += wphi[i] * std::sin(u[i] * u[i] * x);
        return 0.5 + total / M_PI;
    }
};

}  // namespace

TEST_CASE("pure drift exits deterministically")
{
    auto s = drift_only(-1.0);
    auto rec = simulate_path(s, Interval{0.0, 1.0}, BoundaryMode::Stopped, 0.5, params(1), 0);
    CHECK(rec.tau == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rec.side == ExitSide::Left);
    CHECK(rec.exit_location == 0.0);
    CHECK(!rec.censored);

    GeneratorSpec curved = drift_only(0.0);
    curved.drift = Drift::function([](double x) { return -x; });
    // x' = -x from 1 reaches 0.25 at log 4
    auto r2 = simulate_path(curved, Interval{0.25, 2.0}, BoundaryMode::Stopped, 1.0, params(1), 0);
    CHECK(r2.tau == doctest::Approx(std::log(4.0)).epsilon(1e-6));
}

TEST_CASE("interrupted one-sided jumps land exactly on the boundary")
{
    auto s = spec_of(stable_one_sided(0.5, JumpSide::Negative));
    SimParams p = params(1);
    p.t_max = 50;
    p.record_path = true;
    for (std::uint64_t k = 0; k < 50; ++k) {
        auto rec = simulate_path(s, Interval{0.0, kInfinity}, BoundaryMode::Interrupted, 1.0, p, k);
        REQUIRE(!rec.censored);
        CHECK(rec.side == ExitSide::Left);
        CHECK(rec.exit_location == 0.0);
        CHECK(rec.final_state == 0.0);
        for (double x : rec.states) CHECK(x > 0.0);
    }
}

TEST_CASE("killed paths report the escaping landing point")
{
    auto s = spec_of(stable_symmetric(0.5));
    for (std::uint64_t k = 0; k < 40; ++k) {
        auto rec = simulate_path(s, Interval{-1.0, 1.0}, BoundaryMode::Killed, 0.0, params(1), k);
        if (rec.censored) continue;
        if (rec.side == ExitSide::Left) CHECK(rec.exit_location <= -1.0);
        if (rec.side == ExitSide::Right) CHECK(rec.exit_location >= 1.0);
    }
}

TEST_CASE("paths are reproducible and thread-count independent")
{
    auto s = spec_of(stable_symmetric(0.5));
    SimParams p = params(3000);
    p.record_path = true;
    auto a = simulate_path(s, Interval{-1, 1}, BoundaryMode::Interrupted, 0.3, p, 17);
    auto b = simulate_path(s, Interval{-1, 1}, BoundaryMode::Interrupted, 0.3, p, 17);
    CHECK(a.tau == b.tau);
    CHECK(a.states == b.states);
    CHECK(a.holding == b.holding);
    auto c = simulate_path(s, Interval{-1, 1}, BoundaryMode::Interrupted, 0.3, p, 18);
    CHECK(c.states != a.states);

    p.record_path = false;
    p.threads = 1;
    auto e1 = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.3, p);
    p.threads = 3;
    auto e3 = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.3, p);
    CHECK(e1.p_right.value == e3.p_right.value);
    CHECK(e1.mean_exit_time.value == e3.mean_exit_time.value);
    CHECK(e1.mean_exit_time.se == e3.mean_exit_time.se);
}

TEST_CASE("interrupted and stopped paths agree through first contact")
{
    auto s = spec_of(stable_symmetric(0.7));
    s.drift = Drift::function([](double x) { return 0.3 - 0.2 * x; });
    for (std::uint64_t k = 0; k < 30; ++k) {
        auto i = simulate_path(s, Interval{-1, 1}, BoundaryMode::Interrupted, 0.1, params(1), k);
        auto st = simulate_path(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.1, params(1), k);
        CHECK(i.tau == st.tau);
        CHECK(i.side == st.side);
        CHECK(i.exit_location == st.exit_location);
    }
}

TEST_CASE("exit statistics bookkeeping")
{
    auto s = spec_of(stable_symmetric(0.5));
    SimParams p = params(4000);
    p.t_max = 0.05;  // force some censoring
    auto e = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, p);
    CHECK(e.p_left.value + e.p_right.value + e.p_censored.value == 1.0);
    CHECK(e.p_censored.value > 0.01);
    CHECK(e.censoring_warning);
    CHECK(e.disc_right.value == e.p_right.value);
    CHECK(e.disc_left.value == e.p_left.value);

    p.lambda = 2.0;
    auto d = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, p);
    CHECK(d.disc_right.value < d.p_right.value);
    CHECK(d.disc_right.value > std::exp(-2.0 * p.t_max) * d.p_right.value);

    CHECK_THROWS_AS(exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 2.0, p), DomainError);
    p.h = 0;
    CHECK_THROWS_AS(exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, p), DomainError);
}

TEST_CASE("symmetric stable exit law, order below one")
{
    auto s = spec_of(stable_symmetric(0.5));
    auto mid = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, params(20000));
    CHECK(within(mid.p_right, 0.5));
    auto off = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.5, params(20000));
    MESSAGE("p_right(0.5) = " << off.p_right.value << " +- " << off.p_right.se);
    CHECK(within(off.p_right, oracle::exit_prob(0.5, 0.5)));
    CHECK(within(off.mean_exit_time, stable_mean_exit_time(0.5, 0.5), 4.0));
}

TEST_CASE("free mode marginal matches characteristic-function inversion")
{
    auto s = spec_of(stable_symmetric(0.5));
    SimParams p = params(100000);
    p.t_max = 1.0;
    std::vector<double> end;
    end.reserve(p.paths);
    for (long i = 0; i < p.paths; ++i)
        end.push_back(simulate_path(s, Interval{-1, 1}, BoundaryMode::Free, 0.0, p, i).final_state);
    std::sort(end.begin(), end.end());
    TruncatedStableCdf cdf(0.5, p.h, 1.0);
    double ks = 0;
    for (int i = -45; i <= 45; ++i) {
        double x = 0.02 * std::sinh(i / 6.0);
        double emp = static_cast<double>(std::upper_bound(end.begin(), end.end(), x) - end.begin()) / end.size();
        ks = std::max(ks, std::abs(emp - cdf(x)));
    }
    MESSAGE("Kolmogorov distance " << ks);
    CHECK(ks <= 0.01);
}

TEST_CASE("occupation histogram")
{
    auto s = spec_of(stable_symmetric(0.5));
    SimParams p = params(20000);
    auto one = occupation_histogram(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, p, 1);
    CHECK(one.mass[0].value == doctest::Approx(one.exits.mean_exit_time.value).epsilon(1e-12));

    auto h = occupation_histogram(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, p, 10);
    double total = 0;
    for (auto& m : h.mass) total += m.value;
    CHECK(total == doctest::Approx(h.exits.mean_exit_time.value).epsilon(1e-12));
    for (int k = 0; k < 5; ++k) {
        const auto &l = h.mass[k], &r = h.mass[9 - k];
        CHECK(std::abs(l.value - r.value) <= 3 * std::hypot(l.se, r.se));
    }
    // central bins against the occupation density
    for (int k = 3; k <= 6; ++k) {
        double ref = oracle::composite([](double y) { return oracle::occupation_density(0.5, 0.0, y); },
                                       h.edges[k], h.edges[k + 1], 8);
        MESSAGE("bin " << k << ": " << h.mass[k].value << " +- " << h.mass[k].se << " vs " << ref);
        CHECK(within(h.mass[k], ref, 4.0));
    }

    // drift only: time spent is split along the flow
    auto d = occupation_histogram(drift_only(-1.0), Interval{0, 1}, BoundaryMode::Stopped, 0.95, params(2), 4);
    CHECK(d.mass[0].value == doctest::Approx(0.25));
    CHECK(d.mass[3].value == doctest::Approx(0.2));
}

TEST_CASE("representation estimate")
{
    auto s = spec_of(stable_symmetric(0.5));
    SimParams p = params(4000);
    auto r = representation_estimate(s, Interval{-1, 1}, 0.0, p, 1.0, 1.0, [](double) { return 1.0; });
    // f = 1 - E tau
    CHECK(r.value.value == doctest::Approx(1.0 - r.exits.mean_exit_time.value).epsilon(1e-12));
    p.lambda = 1.0;
    auto d = representation_estimate(s, Interval{-1, 1}, 0.0, p, 0.0, 0.0, [](double) { return 1.0; });
    // int_0^tau e^{-s} ds = 1 - e^{-tau}
    double disc = d.exits.disc_left.value + d.exits.disc_right.value;
    CHECK(d.occupation.value == doctest::Approx(1.0 - disc).epsilon(1e-10));
}

TEST_CASE("thinning against the majorant")
{
    auto k = stable_like(0.5, [](double x) { return 1.0 + 0.5 * std::sin(x); }, 1.5);
    auto s = spec_of(k);
    auto e = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, params(2000));
    CHECK(e.p_left.value + e.p_right.value + e.p_censored.value == 1.0);

    auto bad = stable_like(0.5, [](double) { return 2.0; }, 1.0);
    CHECK_THROWS_AS(simulate_path(spec_of(bad), Interval{-1, 1}, BoundaryMode::Stopped, 0.0, params(1), 0),
                    MajorantViolation);
}

TEST_CASE("class and mode errors")
{
    auto s2 = spec_of(stable_symmetric(1.5));
    CHECK_THROWS_AS(simulate_path(s2, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, params(1), 0), ClassError);
    CHECK_THROWS_AS(exit_statistics(s2, Interval{-1, 1}, BoundaryMode::Killed, 0.0, params(10)), ClassError);
    auto s1 = spec_of(stable_symmetric(0.5));
    CHECK_THROWS_AS(simulate_path_order2(s1, Interval{-1, 1}, 0.0, params(1), 0), ClassError);
    CHECK_THROWS_AS(simulate_path_order2(s2, Interval{-1, kInfinity}, 0.0, params(1), 0), DomainError);
}

TEST_CASE("order-2 scheme")
{
    auto s = spec_of(stable_symmetric(1.5));
    auto mid = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.0, params(4000, 1e-2));
    CHECK(within(mid.p_right, 0.5));

    auto coarse = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.5, params(8000, 1e-2));
    auto fine = exit_statistics(s, Interval{-1, 1}, BoundaryMode::Stopped, 0.5, params(8000, 5e-3));
    MESSAGE("h=1e-2: " << coarse.p_right.value << "  h=5e-3: " << fine.p_right.value
                       << "  oracle: " << oracle::exit_prob(1.5, 0.5));
    CHECK(std::abs(coarse.p_right.value - fine.p_right.value) <= 3 * std::hypot(coarse.p_right.se, fine.p_right.se));
    CHECK(within(fine.p_right, oracle::exit_prob(1.5, 0.5)));
    CHECK(within(fine.mean_exit_time, stable_mean_exit_time(1.5, 0.5), 4.0));
}

TEST_CASE("one-sided first passage: mean and Laplace transform")
{
    const double beta = 0.5;
    auto s = spec_of(stable_one_sided(beta, JumpSide::Negative));
    std::vector<double> lr, lt;
    for (double r : {0.4, 0.2, 0.1, 0.05}) {
        SimParams p = params(20000);
        p.lambda = 1.0;
        auto e = exit_statistics(s, Interval{0.0, kInfinity}, BoundaryMode::Interrupted, r, p);
        MESSAGE("r=" << r << " E tau " << e.mean_exit_time.value << " +- " << e.mean_exit_time.se << " vs "
                     << std::pow(r, beta) / bm::tgamma(1 + beta) << "; laplace " << e.disc_left.value << " vs "
                     << oracle::mittag_leffler_series(beta, -std::pow(r, beta)));
        CHECK(within(e.mean_exit_time, std::pow(r, beta) / bm::tgamma(1 + beta), 4.0));
        CHECK(within(e.disc_left, oracle::mittag_leffler_series(beta, -std::pow(r, beta))));
        lr.push_back(std::log(r));
        lt.push_back(std::log(e.mean_exit_time.value));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) mx += lr[i] / lr.size(), my += lt[i] / lt.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) sxy += (lr[i] - mx) * (lt[i] - my), sxx += (lr[i] - mx) * (lr[i] - mx);
    CHECK(std::abs(sxy / sxx - beta) < 0.1);
}
