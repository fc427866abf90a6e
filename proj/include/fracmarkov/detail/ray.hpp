#pragma once

// Jump integrals along one ray from x. With g(z) = f(x + s z) and
// w(z) = nu(x, s z) for z > 0 the routines return
//   int_0^L [g(z) - g(0) - [second] c z chi(z)] w(z) dz,   c = g'(0).

#include "fracmarkov/detail/local_expansion.hpp"
#include "fracmarkov/errors.hpp"
#include "fracmarkov/kernel.hpp"
#include "fracmarkov/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace fracmarkov::detail {

struct RayIntegral {
    double value;
    double slope;  // g'(0) from the local expansion
    double g0;
};

// int_R^inf h(z) dz for h = O(z^(-1-alpha)), via z = R u^(-1/alpha).
template <class H>
double power_tail(const H& h, double R, double alpha, double tol = 1e-12, double* err = nullptr)
{
    auto t = [&](double u) {
        if (u <= 0.0) return 0.0;
        double z = R * std::pow(u, -1.0 / alpha);
        double v = h(z) * (R / alpha) * std::pow(u, -1.0 / alpha - 1.0);
        return std::isfinite(v) ? v : 0.0;
    };
    return quad::gk(t, 0.0, 1.0, tol, 14, err);
}

// tail_mass(R) = int_R^inf w.
template <class G, class W, class T>
RayIntegral ray_integral(const G& g, const W& w, const T& tail_mass, double L, double alpha_near, double alpha_far,
                         bool second, Mollifier chi, double tol = 1e-12, bool strict_tail = true)
{
    double delta_max = std::min(L, 10.0) / 10.0;
    LocalExpansion ex(g, 0.0, 1.0, delta_max);
    double delta = ex.delta();
    double g0 = ex.value0();
    double c = ex.slope();
    double near;
    if (second) {
        auto phi = [&](double z) { return ex.second(z) + c * z * (1.0 - mollifier_value(chi, z)); };
        near = near_zero_integral(phi, w, delta, 2.0, alpha_near, tol);
    } else {
        near = near_zero_integral([&](double z) { return ex.first(z); }, w, delta, 1.0, alpha_near, tol);
    }
    auto h = [&](double z) {
        double d = g(z) - g0;
        if (second) d -= c * z * mollifier_value(chi, z);
        return d * w(z);
    };
    double reach = std::min(L, std::max(10.0, 100.0 * delta));
    double far = 0.0;
    if (second && chi == Mollifier::Indicator && delta < 1.0 && reach > 1.0)
        far = quad::gk(h, delta, 1.0, tol, 14) + quad::gk(h, 1.0, reach, tol, 14);
    else
        far = quad::gk(h, delta, reach, tol, 14);
    if (std::isinf(L)) {
        double err = 0.0;
        double tg = power_tail([&](double z) { return g(z) * w(z); }, reach, alpha_far, tol, &err);
        if (strict_tail && err > 1e3 * tol * std::max(1.0, std::abs(tg)))
            throw ConvergenceError("jump integral: tail did not converge");
        far += tg - g0 * tail_mass(reach);
        if (second && !(chi == Mollifier::Indicator && reach >= 1.0)) {
            if (chi == Mollifier::Unit && !(alpha_far > 1.0))
                throw ConvergenceError("jump integral: first moment diverges at infinity for the unit mollifier");
            auto zm = [&](double u) {
                if (u <= 0.0) return 0.0;
                double z = reach * std::pow(u, -1.0 / alpha_far);
                double v = z * mollifier_value(chi, z) * w(z) * (reach / alpha_far) * std::pow(u, -1.0 / alpha_far - 1.0);
                return std::isfinite(v) ? v : 0.0;
            };
            far -= c * quad::tanh_sinh(zm, 0.0, 1.0, tol);
        }
    } else if (L > reach) {
        far += quad::gk(h, reach, L, tol, 14);
    }
    return {near + far, c, g0};
}

// int_L^inf z chi(z) w(z) dz
template <class W>
double outside_moment(const W& w, double L, double alpha_far, Mollifier chi, double tol = 1e-12)
{
    if (std::isinf(L)) return 0.0;
    if (chi == Mollifier::Indicator && L >= 1.0) return 0.0;
    auto h = [&](double z) { return z * mollifier_value(chi, z) * w(z); };
    double v = 0.0;
    double start = L;
    if (chi == Mollifier::Indicator) return quad::gk(h, L, 1.0, tol, 14);
    if (chi == Mollifier::Unit && !(alpha_far > 1.0))
        throw ConvergenceError("outside moment diverges for the unit mollifier");
    double a = chi == Mollifier::Cauchy ? alpha_far + 1.0 : alpha_far - 1.0;
    // z chi w = O(z^(-1-a)) at infinity
    auto t = [&](double u) {
        if (u <= 0.0) return 0.0;
        double z = start * std::pow(u, -1.0 / a);
        double r = h(z) * (start / a) * std::pow(u, -1.0 / a - 1.0);
        return std::isfinite(r) ? r : 0.0;
    };
    v += quad::tanh_sinh(t, 0.0, 1.0, tol);
    return v;
}

}  // namespace fracmarkov::detail
