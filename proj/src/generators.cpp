#include "fracmarkov/generators.hpp"

#include "fracmarkov/detail/ray.hpp"
#include "fracmarkov/errors.hpp"
#include "fracmarkov/quadrature.hpp"
#include "fracmarkov/rng.hpp"
#include "fracmarkov/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace fracmarkov {

namespace {

constexpr std::array<JumpSide, 2> kSides{JumpSide::Negative, JumpSide::Positive};

double sign_of(JumpSide s) { return s == JumpSide::Negative ? -1.0 : 1.0; }

void check_point(const Interval& r, double x)
{
    if (!(r.a < r.b)) throw DomainError("interval needs a < b");
    if (!(x >= r.a && x <= r.b)) throw DomainError("state outside the closed interval");
}

void check_diffusion(const GeneratorSpec& spec, double x)
{
    if (spec.diffusion && spec.diffusion(x) != 0.0)
        throw DomainError("nonzero diffusion is not supported by the jump operators");
}

struct SidePart {
    bool active = false;
    double length = 0.0;    // distance to the boundary along the side
    double interior = 0.0;  // ray integral up to the boundary
    double escape = 0.0;    // mass beyond the boundary
    double moment = 0.0;    // int_L^inf z chi nu (compensated only)
    double slope = 0.0;     // f'(x) times the side sign
};

SidePart side_part(const GeneratorSpec& spec, const Interval& r, const ScalarFunction& f, double x, JumpSide side,
                   bool second)
{
    SidePart p;
    const auto& k = spec.kernel;
    if (k.majorant.empty(side)) return p;
    double s = sign_of(side);
    p.length = side == JumpSide::Negative ? x - r.a : r.b - x;
    if (p.length <= 0.0) return p;
    p.active = true;
    auto g = [&](double z) { return f(x + s * z); };
    auto w = [&](double z) { return k.density(x, s * z); };
    auto tail = [&](double R) { return k.tail_mass(x, R, side); };
    auto ray = detail::ray_integral(g, w, tail, p.length, k.majorant.near_exponent(side), k.majorant.far_exponent(side),
                                    second, spec.mollifier);
    p.interior = ray.value;
    p.slope = ray.slope;
    if (!std::isinf(p.length)) {
        p.escape = k.tail_mass(x, p.length, side);
        if (second) p.moment = detail::outside_moment(w, p.length, k.majorant.far_exponent(side), spec.mollifier);
    }
    return p;
}

double drift_term(const GeneratorSpec& spec, const Interval& r, const ScalarFunction& f, double x)
{
    if (spec.drift.is_zero()) return 0.0;
    double gx = spec.drift(x);
    return gx == 0.0 ? 0.0 : gx * f.derivative(x, r.a, r.b);
}

}  // namespace

EscapeMass escape_mass(const JumpKernel& kernel, const Interval& region, double x)
{
    check_point(region, x);
    return {kernel.tail_mass(x, x - region.a, JumpSide::Negative), kernel.tail_mass(x, region.b - x, JumpSide::Positive)};
}

double apply_interrupted(const GeneratorSpec& spec, const Interval& region, const ScalarFunction& f, double x)
{
    if (spec.kernel.order_class != OrderClass::BoundedVariation)
        throw ClassError("apply_interrupted needs a kernel of order at most one");
    check_point(region, x);
    check_diffusion(spec, x);
    double fx = f(x);
    double sum = drift_term(spec, region, f, x);
    for (JumpSide side : kSides) {
        SidePart p = side_part(spec, region, f, x, side, false);
        if (!p.active) continue;
        sum += p.interior;
        if (p.escape > 0.0) sum += (f(side == JumpSide::Negative ? region.a : region.b) - fx) * p.escape;
    }
    return sum;
}

double apply_checkpoint(const GeneratorSpec& spec, const CheckpointSet& set, const ScalarFunction& f, double x)
{
    validate(Region{set});
    return apply_interrupted(spec, enclosing_cell(set, x), f, x);
}

double apply_killed(const GeneratorSpec& spec, const Interval& region, const ScalarFunction& f, double x)
{
    check_point(region, x);
    if (!(x > region.a && x < region.b)) throw DomainError("apply_killed: state must be interior");
    check_diffusion(spec, x);
    bool second = spec.kernel.order_class == OrderClass::Compensated;
    double fx = f(x);
    double sum = drift_term(spec, region, f, x);
    for (JumpSide side : kSides) {
        SidePart p = side_part(spec, region, f, x, side, second);
        if (!p.active) continue;
        sum += p.interior - fx * p.escape - p.slope * p.moment;
    }
    return sum;
}

double apply_interrupted_order2(const GeneratorSpec& spec, const Interval& region, const ScalarFunction& f, double x,
                                bool regularized)
{
    if (spec.kernel.order_class != OrderClass::Compensated)
        throw ClassError("apply_interrupted_order2 needs a compensated kernel");
    if (f.smoothness() != Smoothness::C2) throw SmoothnessError("apply_interrupted_order2 needs a C2 function");
    check_point(region, x);
    if (!(x > region.a && x < region.b)) throw DomainError("apply_interrupted_order2: state must be interior");
    check_diffusion(spec, x);
    double fx = f(x);
    double sum = drift_term(spec, region, f, x);
    for (JumpSide side : kSides) {
        SidePart p = side_part(spec, region, f, x, side, true);
        if (!p.active) continue;
        double bnd = side == JumpSide::Negative ? region.a : region.b;
        sum += p.interior - p.slope * p.moment;
        if (p.escape > 0.0) sum += (f(bnd) - fx) * p.escape;
        if (regularized && !std::isinf(p.length)) {
            // f'(bnd) int [(bnd - x) - z chi] nu over the escaping jumps
            double s = sign_of(side);
            double dfb = f.derivative(bnd, region.a, region.b);
            sum -= dfb * s * (p.length * p.escape - p.moment);
        }
    }
    return sum;
}

// Multidimensional operators.

KernelND stable_like_nd(double beta, int dim, std::function<double(std::span<const double>)> amplitude)
{
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("stable_like_nd: beta must lie in (0,1)");
    if (dim < 1) throw DomainError("stable_like_nd: dimension must be positive");
    KernelND k;
    k.dim = dim;
    k.alpha_near = beta;
    k.alpha_far = beta;
    k.density = [beta, dim, amplitude](std::span<const double> x, std::span<const double> y) {
        double r2 = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
        return r2 > 0.0 ? amplitude(x) * std::pow(r2, -0.5 * (dim + beta)) : 0.0;
    };
    k.name = "stable_like";
    return k;
}

namespace {

double unit_sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / gamma(0.5 * n); }

// Jump integral restricted to the ray direction e.
double direction_value(const KernelND& k, const Region& region, const FieldFunction& f, std::span<const double> x,
                       std::span<const double> e, double fx)
{
    int n = k.dim;
    double L = ray_length(region, x, e);
    if (L <= 0.0) return 0.0;
    std::vector<double> p(n), y(n);
    auto g = [&](double r) {
        for (int i = 0; i < n; ++i) p[i] = x[i] + r * e[i];
        return f(p);
    };
    auto w = [&](double r) {
        for (int i = 0; i < n; ++i) y[i] = r * e[i];
        return k.density(x, y) * std::pow(r, n - 1);
    };
    auto tail = [&](double R) { return detail::power_tail(w, R, k.alpha_far); };
    auto ray = detail::ray_integral(g, w, tail, L, k.alpha_near, k.alpha_far, false, Mollifier::Indicator, 1e-11, false);
    double v = ray.value;
    if (!std::isinf(L)) v += (g(L) - fx) * tail(L);
    return v;
}

}  // namespace

double apply_interrupted(const GeneratorSpecND& spec, const Region& region, const FieldFunction& f,
                         std::span<const double> x)
{
    validate(region);
    const KernelND& k = spec.kernel;
    int n = k.dim;
    if (dimension(region) != n) throw DomainError("kernel and region dimensions differ");
    if (static_cast<int>(x.size()) != n) throw DomainError("state dimension mismatch");
    if (!contains(region, x)) throw DomainError("state outside the closed region");
    if (!(k.alpha_near > 0.0 && k.alpha_near < 1.0)) throw ClassError("multidimensional operators need order below one");
    double fx = f(x);
    double sum = 0.0;
    if (spec.drift) {
        std::vector<double> gam = spec.drift(x);
        std::vector<double> p(x.begin(), x.end());
        for (int i = 0; i < n; ++i) {
            if (gam[i] == 0.0) continue;
            double h = 1e-3 * std::max(1.0, std::abs(x[i]));
            auto at = [&](double t) {
                p[i] = x[i] + t;
                double v = f(p);
                p[i] = x[i];
                return v;
            };
            sum += gam[i] * (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
        }
    }
    std::vector<double> e(n);
    if (n == 1) {
        for (double s : {-1.0, 1.0}) {
            e[0] = s;
            sum += direction_value(k, region, f, x, e, fx);
        }
        return sum;
    }
    if (n == 2) {
        auto by_angle = [&](double th) {
            e[0] = std::cos(th);
            e[1] = std::sin(th);
            return direction_value(k, region, f, x, e, fx);
        };
        // e_1 = 0 separates directions that reach a flat boundary from those that do not
        return sum + quad::tanh_sinh(by_angle, -M_PI / 2, M_PI / 2, 1e-10) +
               quad::tanh_sinh(by_angle, M_PI / 2, 3 * M_PI / 2, 1e-10);
    }
    if (n == 3) {
        constexpr int m = 24;
        auto by_polar = [&](double th) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) {
                double ph = 2.0 * M_PI * j / m;
                e[0] = std::cos(th);
                e[1] = std::sin(th) * std::cos(ph);
                e[2] = std::sin(th) * std::sin(ph);
                acc += direction_value(k, region, f, x, e, fx);
            }
            return acc * std::sin(th) * 2.0 * M_PI / m;
        };
        return sum + quad::tanh_sinh(by_polar, 0.0, M_PI / 2, 1e-9) + quad::tanh_sinh(by_polar, M_PI / 2, M_PI, 1e-9);
    }
    // fixed pseudo-random directions, antithetic pairs
    constexpr int pairs = 2048;
    Rng rng(0x5eed, static_cast<std::uint64_t>(n));
    double acc = 0.0;
    for (int j = 0; j < pairs; ++j) {
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            e[i] = rng.normal();
            norm += e[i] * e[i];
        }
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) e[i] /= norm;
        acc += direction_value(k, region, f, x, e, fx);
        for (int i = 0; i < n; ++i) e[i] = -e[i];
        acc += direction_value(k, region, f, x, e, fx);
    }
    return sum + acc / (2.0 * pairs) * unit_sphere_area(n);
}

// Condition report.

bool ConditionReport::all_passed() const
{
    return std::all_of(entries.begin(), entries.end(), [](const ConditionEntry& e) { return e.informational || e.passed; });
}

const ConditionEntry* ConditionReport::find(const std::string& name) const
{
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

// Least-squares fit of log v = log C + r log eps.
std::pair<double, double> fit_power(const std::vector<double>& eps, const std::vector<double>& v)
{
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(v[i] > 0.0) || !std::isfinite(v[i])) continue;
        double lx = std::log(eps[i]), ly = std::log(v[i]);
        n += 1;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    if (n < 2) return {0.0, 0.0};
    double r = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double c = std::exp((sy - r * sx) / n);
    return {c, r};
}

// int_0^eps z^k w(z) dz for w = O(z^(-1-alpha)); infinite if alpha >= k
template <class W>
double near_moment(const W& w, double eps, double k, double alpha)
{
    if (alpha >= k) return std::numeric_limits<double>::infinity();
    return detail::near_zero_integral([k](double z) { return std::pow(z, k); }, w, eps, k, alpha);
}

void check_probe(const std::vector<double>& radii)
{
    if (radii.empty()) throw DomainError("condition probe needs radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw DomainError("probe radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1])) throw DomainError("probe radii must be decreasing");
    }
}

}  // namespace

ConditionReport check_kernel_conditions(const GeneratorSpec& spec, const ConditionProbe& probe)
{
    if (probe.states.empty()) throw DomainError("condition probe needs states");
    check_probe(probe.radii);
    const JumpKernel& k = spec.kernel;
    bool bv = k.order_class == OrderClass::BoundedVariation;
    double kpow = bv ? 1.0 : 2.0;
    ConditionReport rep;

    auto side_w = [&](double x, JumpSide side) {
        double s = sign_of(side);
        return [&k, x, s](double z) { return k.density(x, s * z); };
    };

    {
        ConditionEntry e;
        e.name = "uniform_bound";
        double sup = 0.0;
        for (double x : probe.states) {
            double v = 0.0;
            for (JumpSide side : kSides) {
                if (k.majorant.empty(side)) continue;
                v += near_moment(side_w(x, side), 1.0, kpow, k.majorant.near_exponent(side)) + k.tail_mass(x, 1.0, side);
            }
            e.values.push_back(v);
            sup = std::max(sup, v);
        }
        e.constant = sup;
        e.passed = std::isfinite(sup);
        e.detail = bv ? "sup_x int min(1,|y|) nu(x,y) dy" : "sup_x int min(1,y^2) nu(x,y) dy";
        rep.entries.push_back(e);
    }
    {
        ConditionEntry e;
        e.name = "derivative_bound";
        double sup = 0.0;
        if (!k.state_independent) {
            for (double x : probe.states) {
                double h = 1e-4 * std::max(1.0, std::abs(x));
                double v = 0.0;
                for (JumpSide side : kSides) {
                    if (k.majorant.empty(side)) continue;
                    double s = sign_of(side);
                    auto dw = [&](double z) {
                        return std::abs(k.density(x + h, s * z) - k.density(x - h, s * z)) / (2.0 * h);
                    };
                    v += near_moment(dw, 1.0, kpow, k.majorant.near_exponent(side)) +
                         detail::power_tail(dw, 1.0, k.majorant.far_exponent(side));
                }
                e.values.push_back(v);
                sup = std::max(sup, v);
            }
        }
        e.constant = sup;
        e.passed = std::isfinite(sup);
        e.detail = "sup_x int min(1,|y|) |d nu/dx| dy";
        rep.entries.push_back(e);
    }
    {
        ConditionEntry e;
        e.name = "tightness";
        for (double d : probe.radii) {
            double sup = 0.0;
            for (double x : probe.states)
                for (JumpSide side : kSides)
                    if (!k.majorant.empty(side))
                        sup = std::max(sup, near_moment(side_w(x, side), d, kpow, k.majorant.near_exponent(side)));
            e.values.push_back(sup);
        }
        auto [c, r] = fit_power(probe.radii, e.values);
        e.constant = c;
        e.exponent = r;
        bool decreasing = std::is_sorted(e.values.rbegin(), e.values.rend());
        e.passed = decreasing && std::isfinite(e.values.front()) && (e.values.back() == 0.0 || r > 0.05);
        e.detail = "sup_x int_{|y|<=delta} |y| nu dy over the radius grid; fitted C delta^r";
        rep.entries.push_back(e);
    }
    // regularity bounds at the endpoints
    for (JumpSide side : kSides) {
        bool left = side == JumpSide::Negative;
        double end = left ? probe.endpoints.a : probe.endpoints.b;
        if (std::isinf(end)) continue;
        ConditionEntry e;
        e.name = left ? "regularity_left" : "regularity_right";
        if (!bv) {
            e.informational = true;
            e.detail = "stated for kernels of order at most one";
            rep.entries.push_back(e);
            continue;
        }
        if (k.majorant.empty(side)) {
            e.values.assign(probe.radii.size(), 0.0);
            e.detail = "no jumps towards the endpoint";
            rep.entries.push_back(e);
            continue;
        }
        auto w = side_w(end, side);
        for (double eps : probe.radii)
            e.values.push_back(near_moment(w, eps, 1.0, k.majorant.near_exponent(side)) + eps * k.tail_mass(end, eps, side));
        auto [c, r] = fit_power(probe.radii, e.values);
        e.constant = c;
        e.exponent = r;
        e.passed = c > 0.0 && r > 0.0 && r < 1.0;
        e.detail = "int min(|y|,eps) nu(endpoint,y) dy over jumps towards the endpoint; fitted C eps^r";
        rep.entries.push_back(e);
    }
    if (!std::isinf(probe.endpoints.a) || !std::isinf(probe.endpoints.b)) {
        double ga = std::isinf(probe.endpoints.a) ? 0.0 : spec.drift(probe.endpoints.a);
        double gb = std::isinf(probe.endpoints.b) ? 0.0 : spec.drift(probe.endpoints.b);
        if (!std::isinf(probe.endpoints.a)) {
            ConditionEntry e{"drift_regular_left", ga < 0.0, true, {ga}, 0.0, 0.0, "gamma(a) < 0"};
            rep.entries.push_back(e);
        }
        if (!std::isinf(probe.endpoints.b)) {
            ConditionEntry e{"drift_regular_right", gb > 0.0, true, {gb}, 0.0, 0.0, "gamma(b) > 0"};
            rep.entries.push_back(e);
        }
        ConditionEntry e{"boundary_drift_signs", ga >= 0.0 && gb <= 0.0, true, {ga, gb}, 0.0, 0.0,
                         "gamma(a) >= 0 and gamma(b) <= 0 (semigroup on C[a,b]); not enforced"};
        rep.entries.push_back(e);
    }
    {
        ConditionEntry e;
        e.name = "monotonicity";
        std::vector<double> xs = probe.states;
        std::sort(xs.begin(), xs.end());
        double worst = 0.0;
        for (double r : probe.radii) {
            for (std::size_t i = 1; i < xs.size(); ++i) {
                double up0 = k.tail_mass(xs[i - 1], r, JumpSide::Positive), up1 = k.tail_mass(xs[i], r, JumpSide::Positive);
                double dn0 = k.tail_mass(xs[i - 1], r, JumpSide::Negative), dn1 = k.tail_mass(xs[i], r, JumpSide::Negative);
                double scale = std::max({1.0, up0, up1, dn0, dn1});
                worst = std::max({worst, (up0 - up1) / scale, (dn1 - dn0) / scale});
            }
        }
        e.values.push_back(worst);
        e.passed = worst <= 1e-9;
        e.detail = "right tails nondecreasing and left tails nonincreasing in x";
        rep.entries.push_back(e);
    }
    return rep;
}

namespace {

// Integral over y_2 in R^(dim-1) of h(|y_2|) nu(x; y1, y_2) with |y_2| <= cap,
// using |y_2| = y1 tan(phi) and a fixed Gauss-Legendre rule in phi. For an
// unbounded cap phi = pi/2 (1 - (1-v)^2) smooths the cos^beta endpoint.
struct GaussRule {
    static constexpr int n = 48;
    double nodes[n], weights[n];
    GaussRule() { quad::gauss_legendre(n, nodes, weights); }
};

template <class H>
double transverse_integral(const KernelND& k, std::span<const double> x, double y1, double cap, const H& h,
                           double sign = 1.0)
{
    static const GaussRule rule;
    int d = k.dim - 1;
    std::vector<double> y(k.dim);
    y[0] = sign * y1;
    bool open = std::isinf(cap);
    constexpr int m = 16;
    // integrand in rho = |y_2| times the Jacobian drho
    auto g = [&](double rho, double drho) {
        double acc = 0.0;
        if (d == 1) {
            for (double s : {-1.0, 1.0}) {
                y[1] = s * rho;
                acc += k.density(x, y);
            }
        } else {
            for (int j = 0; j < m; ++j) {
                double psi = 2.0 * M_PI * j / m;
                y[1] = rho * std::cos(psi);
                y[2] = rho * std::sin(psi);
                acc += k.density(x, y);
            }
            acc *= (2.0 * M_PI / m) * rho;
        }
        double v = acc * h(rho) * drho;
        return std::isfinite(v) ? v : 0.0;
    };
    double sum = 0.0;
    auto panel = [&](double lo, double hi, auto&& map) {
        for (int i = 0; i < GaussRule::n; ++i) {
            double v = lo + (hi - lo) * 0.5 * (rule.nodes[i] + 1.0);
            auto [rho, jac] = map(v);
            sum += 0.5 * (hi - lo) * rule.weights[i] * g(rho, jac);
        }
    };
    // rho = y1 sinh(s) resolves the scale y1 and the range up to 1 alike
    auto sinh_map = [y1](double s) { return std::pair{y1 * std::sinh(s), y1 * std::cosh(s)}; };
    double smax = std::asinh(std::min(cap, 1.0) / y1);
    int panels = std::max(1, static_cast<int>(std::ceil(smax / 4.0)));
    for (int p = 0; p < panels; ++p) panel(smax * p / panels, smax * (p + 1) / panels, sinh_map);
    if (open && y1 < 1.0) {
        // rho = u^(-1/q) over rho > 1 flattens a rho^(-2-alpha) tail
        double q = 1.0 + k.alpha_far;
        auto inv = [q](double u) { return std::pair{std::pow(u, -1.0 / q), std::pow(u, -1.0 / q - 1.0) / q}; };
        panel(0.0, 1.0, inv);
    } else if (open) {
        // y1 >= 1: continue the sinh map far enough for power decay
        double s2 = smax + 40.0;
        for (int p = 0; p < 10; ++p) panel(smax + (s2 - smax) * p / 10, smax + (s2 - smax) * (p + 1) / 10, sinh_map);
    }
    return sum;
}

}  // namespace

ConditionReport check_kernel_conditions(const KernelND& k, const ConditionProbeND& probe)
{
    if (probe.states.empty()) throw DomainError("condition probe needs states");
    check_probe(probe.radii);
    if (k.dim != 2 && k.dim != 3) throw DomainError("multidimensional conditions are evaluated for dim 2 or 3");
    ConditionReport rep;
    auto one = [](double) { return 1.0; };

    {
        ConditionEntry e;
        e.name = "uniform_bound";
        double sup = 0.0;
        for (const auto& x : probe.states) {
            if (static_cast<int>(x.size()) != k.dim) throw DomainError("probe state dimension mismatch");
            // int min(1,|y|) nu over R^dim, split by the sign of y_1 and by |y_1|
            double v = 0.0;
            for (double s : {-1.0, 1.0}) {
                auto inner = [&](double y1) {
                    auto h = [y1](double rho) { return std::min(1.0, std::hypot(y1, rho)); };

                    return transverse_integral(k, x, y1, kInfinity, h, s);
                };
                auto f1 = [&](double t) {
                    double y1 = std::exp(t);
                    return inner(y1) * y1;
                };
                v += quad::gk(f1, std::log(1e-30), 0.0, 1e-9, 10);
                v += detail::power_tail(inner, 1.0, k.alpha_far, 1e-10);
            }
            e.values.push_back(v);
            sup = std::max(sup, v);
        }
        e.constant = sup;
        e.passed = std::isfinite(sup);
        e.detail = "sup_x int min(1,|y|) nu(x;y) dy";
        rep.entries.push_back(e);
    }
    {
        ConditionEntry e;
        e.name = "ugly_condition";
        std::vector<double> worst(probe.radii.size(), 0.0);
        bool finite = true;
        for (const auto& x : probe.states) {
            for (std::size_t i = 0; i < probe.radii.size(); ++i) {
                double eps = probe.radii[i];
                // Omega: eps int_eps^1 dy1 int_{|y|<=1} nu y2^2 / y1^2
                double Om = 0.0;
                if (eps < 1.0) {
                    auto f1 = [&](double t) {
                        double y1 = std::exp(t);
                        double cap = std::sqrt(std::max(0.0, 1.0 - y1 * y1));
                        return transverse_integral(k, x, y1, cap, [](double r) { return r * r; }) / y1;
                    };
                    Om = eps * quad::gk(f1, std::log(eps), 0.0, 1e-6, 8);
                }
                auto inner = [&](double y1) { return transverse_integral(k, x, y1, kInfinity, one); };
                double om = 0.0;
                if (eps < 1.0) om += quad::gk([&](double t) { double y1 = std::exp(t); return inner(y1) * y1; },
                                              std::log(eps), 0.0, 1e-6, 8);
                om += detail::power_tail(inner, std::max(1.0, eps), k.alpha_far, 1e-6);
                double ratio = Om / om;
                if (!std::isfinite(ratio)) finite = false;
                worst[i] = std::max(worst[i], ratio);
            }
        }
        e.values = worst;
        auto [c, r] = fit_power(probe.radii, worst);
        e.constant = *std::max_element(worst.begin(), worst.end());
        e.exponent = r;
        e.passed = finite && (r >= -0.05 || probe.radii.size() < 2);
        e.detail = "max over states of Omega(eps,x)/omega(eps,x); passes when bounded as eps -> 0";
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace fracmarkov
