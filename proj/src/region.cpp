#include "fracmarkov/region.hpp"

#include "fracmarkov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fracmarkov {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void need_dim(std::span<const double> x, int dim)
{
    if (static_cast<int>(x.size()) != dim) throw DomainError("point dimension does not match region");
}

double dot(std::span<const double> u, std::span<const double> v)
{
    return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

// exit length along e for the slab lo <= x_1 <= hi
double slab_length(double x1, double e1, double lo, double hi)
{
    if (e1 > 0.0) return std::isinf(hi) ? kInfinity : std::max(0.0, (hi - x1) / e1);
    if (e1 < 0.0) return std::isinf(lo) ? kInfinity : std::max(0.0, (lo - x1) / e1);
    return kInfinity;
}

}  // namespace

void validate(const Region& region)
{
    std::visit(overloaded{
                   [](const Interval& r) {
                       if (!(r.a < r.b)) throw DomainError("interval needs a < b");
                   },
                   [](const CheckpointSet& r) {
                       if (r.points.empty()) throw DomainError("checkpoint set is empty");
                       for (std::size_t i = 1; i < r.points.size(); ++i)
                           if (!(r.points[i - 1] < r.points[i]))
                               throw DomainError("checkpoints must be strictly increasing");
                   },
                   [](const HalfSpace& r) {
                       if (r.dim < 1) throw DomainError("half-space dimension must be positive");
                   },
                   [](const Band& r) {
                       if (r.dim < 1 || !(r.a < r.b)) throw DomainError("band needs a < b and dim >= 1");
                   },
                   [](const Ball& r) {
                       if (r.dim < 1 || !(r.radius > 0.0)) throw DomainError("ball needs radius > 0 and dim >= 1");
                   },
               },
               region);
}

int dimension(const Region& region)
{
    return std::visit(overloaded{
                          [](const Interval&) { return 1; },
                          [](const CheckpointSet&) { return 1; },
                          [](const HalfSpace& r) { return r.dim; },
                          [](const Band& r) { return r.dim; },
                          [](const Ball& r) { return r.dim; },
                      },
                      region);
}

bool contains(const Region& region, std::span<const double> x)
{
    need_dim(x, dimension(region));
    return std::visit(overloaded{
                          [&](const Interval& r) { return x[0] >= r.a && x[0] <= r.b; },
                          [&](const CheckpointSet&) { return true; },
                          [&](const HalfSpace& r) { return x[0] <= r.b; },
                          [&](const Band& r) { return x[0] >= r.a && x[0] <= r.b; },
                          [&](const Ball& r) { return dot(x, x) <= r.radius * r.radius * (1.0 + 1e-15); },
                      },
                      region);
}

Interval enclosing_cell(const CheckpointSet& set, double x)
{
    const auto& p = set.points;
    auto hi = std::upper_bound(p.begin(), p.end(), x);
    auto lo = std::lower_bound(p.begin(), p.end(), x);
    Interval cell;
    cell.b = hi == p.end() ? kInfinity : *hi;
    cell.a = lo == p.begin() ? -kInfinity : *(lo - 1);
    return cell;
}

double ray_length(const Region& region, std::span<const double> x, std::span<const double> e)
{
    need_dim(x, dimension(region));
    need_dim(e, dimension(region));
    return std::visit(overloaded{
                          [&](const Interval& r) { return slab_length(x[0], e[0], r.a, r.b); },
                          [&](const CheckpointSet& r) {
                              Interval c = enclosing_cell(r, x[0]);
                              return slab_length(x[0], e[0], c.a, c.b);
                          },
                          [&](const HalfSpace& r) { return slab_length(x[0], e[0], -kInfinity, r.b); },
                          [&](const Band& r) { return slab_length(x[0], e[0], r.a, r.b); },
                          [&](const Ball& r) {
                              double xe = dot(x, e);
                              double disc = xe * xe + r.radius * r.radius - dot(x, x);
                              return std::max(0.0, std::sqrt(std::max(0.0, disc)) - xe);
                          },
                      },
                      region);
}

double project_ray(const Interval& region, double x, double y)
{
    return std::max(region.a, std::min(region.b, x + y));
}

std::vector<double> project_ray(const Region& region, std::span<const double> x, std::span<const double> y)
{
    int d = dimension(region);
    need_dim(x, d);
    need_dim(y, d);
    double norm = std::sqrt(dot(y, y));
    if (norm == 0.0) throw DegenerateJumpError("project_ray: zero jump");
    std::vector<double> out(x.begin(), x.end());
    if (const auto* iv = std::get_if<Interval>(&region)) {
        out[0] = project_ray(*iv, x[0], y[0]);
        return out;
    }
    if (const auto* cp = std::get_if<CheckpointSet>(&region)) {
        Interval c = enclosing_cell(*cp, x[0]);
        out[0] = project_ray(c, x[0], y[0]);
        return out;
    }
    std::vector<double> e(d);
    for (int i = 0; i < d; ++i) e[i] = y[i] / norm;
    double len = ray_length(region, x, e);
    double s = std::min(1.0, len / norm);
    for (int i = 0; i < d; ++i) out[i] = x[i] + s * y[i];
    // snap the crossed coordinate onto the boundary exactly
    if (s < 1.0) {
        if (const auto* h = std::get_if<HalfSpace>(&region)) out[0] = h->b;
        if (const auto* b = std::get_if<Band>(&region)) out[0] = y[0] > 0.0 ? b->b : b->a;
    }
    return out;
}

}  // namespace fracmarkov
