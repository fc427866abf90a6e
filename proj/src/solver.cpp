#include "fracmarkov/solver.hpp"

#include "fracmarkov/errors.hpp"
#include "fracmarkov/quadrature.hpp"
#include "fracmarkov/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace fracmarkov {

void BvpProblem::validate() const
{
    if (!(region.a < region.b) || !std::isfinite(region.a) || !std::isfinite(region.b))
        throw DomainError("boundary value problems need a finite interval a < b");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
    if (!g) throw DomainError("source g is missing");
    if (!spec.kernel.density) throw DomainError("kernel density is missing");
}

std::string to_string(SolveMethod m)
{
    switch (m) {
    case SolveMethod::MonteCarlo: return "mc";
    case SolveMethod::Collocation: return "collocation";
    case SolveMethod::ClosedForm: return "closed-form";
    }
    return "?";
}

double SolutionTable::value_at(double x) const
{
    if (grid.empty()) throw DomainError("empty solution table");
    if (x < grid.front() || x > grid.back()) throw DomainError("point outside the solution grid");
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.end()) return values.back();
    std::size_t k = static_cast<std::size_t>(it - grid.begin());
    if (k == 0) return values.front();
    double s = (x - grid[k - 1]) / (grid[k] - grid[k - 1]);
    return values[k - 1] * (1 - s) + values[k] * s;
}

SolutionTable solve_bvp_mc(const BvpProblem& problem, const SimParams& params, const std::vector<double>& grid)
{
    problem.validate();
    if (problem.form == OperatorForm::Killed && (problem.f_a != 0.0 || problem.f_b != 0.0))
        throw DomainError("killed-form problems are simulated with zero boundary data");
    SimParams p = params;
    p.lambda = problem.lambda;
    SolutionTable out;
    out.method = SolveMethod::MonteCarlo;
    const auto& g = problem.g;
    std::function<double(double)> gfun = [&g](double y) { return g(y); };
    for (double x : grid) {
        if (x < problem.region.a || x > problem.region.b) throw DomainError("grid point outside the interval");
        out.grid.push_back(x);
        // the endpoints are hit at time zero
        if (x == problem.region.a || x == problem.region.b) {
            out.values.push_back(x == problem.region.a ? problem.f_a : problem.f_b);
            out.se.push_back(0.0);
            continue;
        }
        auto rep = representation_estimate(problem.spec, problem.region, x, p, problem.f_a, problem.f_b, gfun);
        if (rep.exits.censoring_warning)
            throw CensoringError("more than 1% of paths censored at x = " + std::to_string(x) +
                                 "; raise t_max");
        out.values.push_back(rep.value.value);
        out.se.push_back(rep.value.se);
    }
    return out;
}

SolutionTable solve_bvp_closed_form(double beta, double f_a, double f_b, const ScalarFunction& g,
                                    const std::vector<double>& grid)
{
    if (!(beta > 0.0 && beta < 2.0)) throw DomainError("closed form needs beta in (0, 2)");
    SolutionTable out;
    out.method = SolveMethod::ClosedForm;
    // beta < 1: |x - y|^(beta-1) at y = x; beta > 1: a |x - y|^(beta-1) cusp
    const double q = beta < 1.0 ? 1.0 / beta : 2.0;
    for (double x : grid) {
        if (!(x >= -1.0 && x <= 1.0)) throw DomainError("closed form is available on [-1, 1] only");
        out.grid.push_back(x);
        out.se.push_back(0.0);
        if (x == -1.0 || x == 1.0) {
            out.values.push_back(x == -1.0 ? f_a : f_b);
            continue;
        }
        double p = stable_exit_prob(beta, x);
        // y = x -+ d u^q near x; near the end the density behaves like
        // dist^(beta/2), removed likewise.
        auto side = [&](double len, double s) {
            double half = 0.5 * len;
            auto near = [&](double u) {
                if (u <= 0.0) return 0.0;
                double y = x + s * half * std::pow(u, q);
                if (y == x) return 0.0;
                return g(y) * stable_occupation_density(beta, x, y) * half * q * std::pow(u, q - 1.0);
            };
            const double qe = 2.0 / beta;
            auto edge = [&](double v) {
                if (v <= 0.0) return 0.0;
                double e = half * std::pow(v, qe);
                double y = x + s * (len - e);
                if (std::abs(y) >= 1.0) return 0.0;
                return g(y) * stable_occupation_density(beta, x, y) * half * qe * std::pow(v, qe - 1.0);
            };
            return quad::gk(near, 0.0, 1.0, 1e-12, 12) + quad::gk(edge, 0.0, 1.0, 1e-12, 12);
        };
        double occ = side(x + 1.0, -1.0) + side(1.0 - x, 1.0);
        out.values.push_back(f_a * (1.0 - p) + f_b * p - occ);
    }
    return out;
}

namespace {

std::vector<double> graded_nodes(double a, double b, int n)
{
    std::vector<double> x(n + 2);
    for (int k = 0; k <= n + 1; ++k) x[k] = a + (b - a) * 0.5 * (1.0 - std::cos(M_PI * k / (n + 1)));
    x.front() = a;
    x.back() = b;
    return x;
}

// int_0^len (y/len) w(y) dy with w = O(y^(-1-alpha)), alpha < 1, via
// y = len u^p, p = 1/(1-alpha), which makes the integrand bounded.
template <class W>
double adjacent_weight(const W& w, double len, double alpha)
{
    double p = 1.0 / (1.0 - std::max(alpha, 0.0));
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        double up = std::pow(u, p);
        double y = len * up;
        if (y <= 0.0) return 0.0;
        return up * w(y) * len * p * std::pow(u, p - 1.0);
    };
    return quad::gk(f, 0.0, 1.0, 1e-11, 12);
}

SolutionTable collocate(const BvpProblem& problem, int n)
{
    const auto& spec = problem.spec;
    if (spec.kernel.order_class != OrderClass::BoundedVariation)
        throw ClassError("collocation handles kernels of order at most one");
    const double a = problem.region.a, b = problem.region.b;
    auto x = graded_nodes(a, b, n);
    const int m = n + 2;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, m);  // rows: interior nodes, columns: all nodes
    Eigen::VectorXd diag_extra = Eigen::VectorXd::Zero(n);
    const auto& k = spec.kernel;
    for (int i = 1; i <= n; ++i) {
        const double xi = x[i];
        if (spec.diffusion && spec.diffusion(xi) != 0.0) throw DomainError("collocation requires zero diffusion");
        auto w = [&](double y) { return k.density(xi, y); };
        for (int c = 0; c + 1 < m; ++c) {
            const double lo = x[c], hi = x[c + 1], len = hi - lo;
            double to_lo = 0.0, to_hi = 0.0;
            if (c == i) {
                // cell to the right of x_i: only the weight of x_{i+1}
                if (!k.majorant.empty(JumpSide::Positive))
                    to_hi = adjacent_weight(w, len, k.majorant.near_exponent(JumpSide::Positive));
            } else if (c + 1 == i) {
                if (!k.majorant.empty(JumpSide::Negative))
                    to_lo = adjacent_weight([&](double y) { return w(-y); }, len,
                                            k.majorant.near_exponent(JumpSide::Negative));
            } else {
                JumpSide side = lo >= xi ? JumpSide::Positive : JumpSide::Negative;
                if (k.majorant.empty(side)) continue;
                // unit cell coordinate: no cancelled differences near the ends
                const double y0 = lo - xi;
                auto f0 = [&](double s) { return (1.0 - s) * len * w(y0 + s * len); };
                auto f1 = [&](double s) { return s * len * w(y0 + s * len); };
                to_lo = quad::gk(f0, 0.0, 1.0, 1e-11, 10);
                to_hi = quad::gk(f1, 0.0, 1.0, 1e-11, 10);
            }
            if (c != i) W(i - 1, c) += to_lo;
            if (c + 1 != i) W(i - 1, c + 1) += to_hi;
        }
        auto esc = escape_mass(k, problem.region, xi);
        if (problem.form == OperatorForm::Interrupted) {
            W(i - 1, 0) += esc.left;
            W(i - 1, m - 1) += esc.right;
        } else {
            diag_extra(i - 1) = esc.left + esc.right;
        }
        // drift by the three-point derivative on the uneven mesh
        double gam = spec.drift(xi);
        if (gam != 0.0) {
            double h1 = xi - x[i - 1], h2 = x[i + 1] - xi;
            W(i - 1, i - 1) += gam * -h2 / (h1 * (h1 + h2));
            W(i - 1, i + 1) += gam * h1 / (h2 * (h1 + h2));
            // the centre weight (h2-h1)/(h1 h2) is restored by the row sum below
        }
    }
    // rows annihilate constants (minus the escape mass for the killed form)
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 1; i <= n; ++i) {
        double off = 0.0;
        for (int j = 0; j < m; ++j)
            if (j != i) off += W(i - 1, j);
        for (int j = 1; j <= n; ++j) A(i - 1, j - 1) = j == i ? -off - diag_extra(i - 1) : W(i - 1, j);
        A(i - 1, i - 1) -= problem.lambda;
        rhs(i - 1) = problem.g(x[i]) - W(i - 1, 0) * problem.f_a - W(i - 1, m - 1) * problem.f_b;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double rc = lu.rcond();
    if (!(rc > 1e-13))
        throw SingularSystemError("collocation matrix is singular (rcond " + std::to_string(rc) +
                                  "); lambda may sit on an eigenvalue");
    Eigen::VectorXd f = lu.solve(rhs);
    double res = (A * f - rhs).lpNorm<Eigen::Infinity>();
    double scale = A.lpNorm<Eigen::Infinity>() * f.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>();
    if (res > 1e-9 * std::max(scale, 1.0))
        throw ConvergenceError("collocation residual " + std::to_string(res) + " exceeds tolerance");
    SolutionTable out;
    out.method = SolveMethod::Collocation;
    out.residual = res;
    out.grid = x;
    out.values.push_back(problem.f_a);
    for (int i = 0; i < n; ++i) out.values.push_back(f(i));
    out.values.push_back(problem.f_b);
    out.se.assign(out.grid.size(), 0.0);
    return out;
}

}  // namespace

SolutionTable solve_bvp_collocation(const BvpProblem& problem, int n, bool extrapolate)
{
    problem.validate();
    if (n < 8) throw DomainError("collocation needs at least 8 interior nodes");
    if (problem.spec.kernel.order_class != OrderClass::BoundedVariation)
        throw ClassError("collocation handles kernels of order at most one");
    auto coarse = collocate(problem, n);
    if (!extrapolate) return coarse;
    // The piecewise-linear operator error is O(h^(2 - alpha)) for the
    // strongest singularity alpha; one Richardson step against the mesh with
    // every cell halved (it contains all coarse nodes) removes it.
    const auto& mj = problem.spec.kernel.majorant;
    double alpha = std::max(mj.near_exponent(JumpSide::Negative), mj.near_exponent(JumpSide::Positive));
    if (alpha <= 0.0) return coarse;
    auto fine = collocate(problem, 2 * n + 1);
    double q = std::pow(2.0, 2.0 - alpha) - 1.0;
    for (int i = 1; i <= n; ++i) {
        double f = fine.values[2 * i];
        coarse.values[i] = f + (f - coarse.values[i]) / q;
    }
    coarse.residual = std::max(coarse.residual, fine.residual);
    return coarse;
}

double relaxation_solution(double beta, double lambda, double a, double f_a, double x)
{
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("relaxation_solution needs beta in (0, 1)");
    if (!(lambda > 0.0)) throw DomainError("relaxation_solution needs lambda > 0");
    if (!(x >= a)) throw DomainError("relaxation_solution needs x >= a");
    if (x == a) return f_a;
    return f_a * mittag_leffler(beta, -lambda * std::pow(x - a, beta));
}

BvpProblem reduce_caputo_to_rl(const BvpProblem& problem, const ScalarFunction& v)
{
    problem.validate();
    if (problem.form != OperatorForm::Interrupted) throw DomainError("problem is already in killed form");
    const double a = problem.region.a, b = problem.region.b;
    if (std::abs(v(a) - problem.f_a) > 1e-12 || std::abs(v(b) - problem.f_b) > 1e-12)
        throw BoundaryMismatchError("v must take the boundary values f_a and f_b");
    BvpProblem out = problem;
    out.form = OperatorForm::Killed;
    out.f_a = 0.0;
    out.f_b = 0.0;
    GeneratorSpec spec = problem.spec;
    Interval region = problem.region;
    ScalarFunction g = problem.g;
    double lambda = problem.lambda;
    out.g = ScalarFunction([spec, region, g, v, lambda](double x) {
        return g(x) + lambda * v(x) - apply_interrupted(spec, region, v, x);
    });
    return out;
}

RegularityReport regularity_probe(const GeneratorSpec& spec, const Interval& region, Endpoint endpoint,
                                  const std::vector<double>& radii, const SimParams& params)
{
    if (radii.size() < 2) throw DomainError("regularity_probe needs at least two radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw DomainError("radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1])) throw DomainError("radii must decrease strictly");
    }
    double end = endpoint == Endpoint::A ? region.a : region.b;
    if (!std::isfinite(end)) throw DomainError("regularity_probe needs a finite endpoint");
    RegularityReport rep;
    rep.endpoint = endpoint;
    rep.radii = radii;
    std::vector<double> lr, lt;
    for (double r : radii) {
        double x0 = endpoint == Endpoint::A ? end + r : end - r;
        if (!(x0 > region.a && x0 < region.b)) throw DomainError("radius reaches past the interval");
        auto e = exit_statistics(spec, region, BoundaryMode::Stopped, x0, params);
        rep.censoring_warning = rep.censoring_warning || e.censoring_warning;
        rep.mean_exit_time.push_back(e.mean_exit_time);
        lr.push_back(std::log(r));
        lt.push_back(std::log(std::max(e.mean_exit_time.value, 1e-300)));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        mx += lr[i] / lr.size();
        my += lt[i] / lt.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        sxy += (lr[i] - mx) * (lt[i] - my);
        sxx += (lr[i] - mx) * (lr[i] - mx);
    }
    rep.exponent = sxy / sxx;
    // decreasing within noise, and a clear power-law decay
    bool monotone = true;
    for (std::size_t i = 1; i < radii.size(); ++i) {
        const auto &prev = rep.mean_exit_time[i - 1], &cur = rep.mean_exit_time[i];
        if (cur.value > prev.value + 3.0 * std::hypot(cur.se, prev.se)) monotone = false;
    }
    rep.regular = monotone && rep.exponent > 0.1 && !rep.censoring_warning;

    ConditionProbe probe;
    probe.endpoints = region;
    if (!std::isfinite(region.a)) probe.endpoints.a = -kInfinity;
    if (!std::isfinite(region.b)) probe.endpoints.b = kInfinity;
    probe.radii = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    double lo = std::isfinite(region.a) ? region.a : end - 1.0, hi = std::isfinite(region.b) ? region.b : end + 1.0;
    for (int i = 1; i <= 5; ++i) probe.states.push_back(lo + (hi - lo) * i / 6.0);
    auto report = check_kernel_conditions(spec, probe);
    if (const auto* entry = report.find(endpoint == Endpoint::A ? "regularity_left" : "regularity_right"))
        rep.lyapunov = *entry;
    return rep;
}

}  // namespace fracmarkov
