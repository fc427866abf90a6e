#pragma once

// Thin wrappers over Boost.Math adaptive quadrature. All routines take a
// relative tolerance; callers are responsible for removing endpoint
// singularities that the rules cannot resolve.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracmarkov::quad {

inline constexpr double kTol = 1e-12;

// Adaptive Gauss-Kronrod (31 points). Tolerances below ~1e-14 cannot be met
// in double precision and would force bisection to max_depth everywhere.
template <class F>
double gk(F f, double a, double b, double tol = kTol, unsigned max_depth = 12, double* error = nullptr)
{
    if (a == b) return 0.0;
    tol = std::max(tol, 1e-14);
    double err = 0.0;
    double l1 = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err, &l1);
    if (error) *error = err;
    return v;
}

// Double-exponential rule; tolerates integrable endpoint singularities.
template <class F>
double tanh_sinh(F f, double a, double b, double tol = kTol, double* error = nullptr)
{
    if (a == b) return 0.0;
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    double v = integrator.integrate(f, a, b, tol, &err, &l1, &levels);
    if (error) *error = err;
    return v;
}

// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, double* nodes, double* weights);

}  // namespace fracmarkov::quad
