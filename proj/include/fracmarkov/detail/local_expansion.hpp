#pragma once

// Chebyshev interpolant of g(z) = f(x + s z) on [0, delta]. Differences
// g(z) - g(0) and g(z) - g(0) - g'(0) z are evaluated through divided-
// difference recurrences, so they keep full relative accuracy as z -> 0.

#include "fracmarkov/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace fracmarkov::detail {

class LocalExpansion {
public:
    static constexpr int kDegree = 16;

    // Shrinks delta from delta_max until the interpolant reproduces f at the
    // interleaved Chebyshev points.
    template <class F>
    LocalExpansion(const F& f, double x, double s, double delta_max, double rel_tol = 1e-13) : delta_(delta_max)
    {
        for (int attempt = 0; attempt < 40; ++attempt) {
            if (build(f, x, s) <= rel_tol) return;
            delta_ *= 0.5;
        }
    }

    double delta() const { return delta_; }
    double value0() const { return value0_; }
    // g'(0), derivative along the direction s.
    double slope() const { return slope_; }

    // g(z) - g(0)
    double first(double z) const
    {
        double u = 2.0 * z / delta_;  // t + 1, kept exact for small z
        double t = u - 1.0;
        double dm = 0.0, d = 1.0, sum = a_[1];
        for (int j = 1; j < kDegree; ++j) {
            double tj = (j & 1) ? -1.0 : 1.0;
            double dn = 2.0 * t * d + 2.0 * tj - dm;
            dm = d;
            d = dn;
            sum += a_[j + 1] * d;
        }
        return u * sum;
    }

    // g(z) - g(0) - g'(0) z
    double second(double z) const
    {
        double u = 2.0 * z / delta_;
        double t = u - 1.0;
        double em = 0.0, e = 0.0, sum = 0.0;
        for (int j = 1; j < kDegree; ++j) {
            double dj = ((j & 1) ? 1.0 : -1.0) * j * j;  // T_j'(-1)
            double en = 2.0 * t * e + 2.0 * dj - em;
            em = e;
            e = en;
            sum += a_[j + 1] * e;
        }
        return u * u * sum;
    }

private:
    // Returns the interpolation defect at the interleaved points relative to
    // the sampled magnitude.
    template <class F>
    double build(const F& f, double x, double s)
    {
        constexpr int n = kDegree;
        value0_ = f(x);
        std::array<double, n + 1> v{};
        double scale = std::abs(value0_);
        for (int k = 0; k <= n; ++k) {
            double t = std::cos(M_PI * k / n);
            v[k] = (k == n) ? 0.0 : f(x + s * delta_ * 0.5 * (1.0 + t)) - value0_;
            scale = std::max(scale, std::abs(v[k] + value0_));
        }
        for (int j = 0; j <= n; ++j) {
            double sum = 0.0;
            for (int k = 0; k <= n; ++k) {
                double w = (k == 0 || k == n) ? 0.5 : 1.0;
                sum += w * v[k] * std::cos(M_PI * j * k / n);
            }
            a_[j] = 2.0 * sum / n;
        }
        a_[0] *= 0.5;
        a_[n] *= 0.5;
        double d0 = 0.0;
        for (int j = 1; j <= n; ++j) d0 += a_[j] * ((j & 1) ? 1.0 : -1.0) * j * j;
        slope_ = 2.0 * d0 / delta_;
        double defect = 0.0;
        for (int k = 0; k < n; ++k) {
            double t = std::cos(M_PI * (k + 0.5) / n);
            double z = delta_ * 0.5 * (1.0 + t);
            double exact = f(x + s * z) - value0_;
            defect = std::max(defect, std::abs(first(z) - exact));
        }
        return scale > 0.0 ? defect / scale : defect;
    }

    double delta_;
    double slope_ = 0.0;
    double value0_ = 0.0;
    std::array<double, kDegree + 1> a_{};
};

// Integral over [0, delta] of phi(z) w(z) where phi = O(z^k) and
// w = O(z^(-1-alpha)) near 0 with alpha < k. The substitution
// z = delta v^p, p = 1/(k - alpha), makes the integrand bounded.
template <class Phi, class W>
double near_zero_integral(const Phi& phi, const W& w, double delta, double k, double alpha, double tol = 1e-12)
{
    if (delta <= 0.0) return 0.0;
    double p = 1.0 / (k - alpha);
    auto g = [&](double v) {
        if (v <= 0.0) return 0.0;
        double z = delta * std::pow(v, p);
        if (z <= 0.0) return 0.0;
        double r = phi(z) * (z * p / v) * w(z);
        return std::isfinite(r) ? r : 0.0;
    };
    return quad::gk(g, 0.0, 1.0, tol, 14);
}

}  // namespace fracmarkov::detail
