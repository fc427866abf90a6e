#include "fracmarkov/function.hpp"

#include "fracmarkov/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fracmarkov {

namespace {

// Largest step not exceeding h0 for which a four-step one-sided stencil fits.
double fit_step(double h0, double room)
{
    return std::min(h0, room / 4.0);
}

}  // namespace

double ScalarFunction::derivative(double x, double lo, double hi) const
{
    if (df_) return df_(x);
    if (!(hi > lo)) throw DomainError("derivative: empty interval");
    const auto& f = f_;
    double h = 1e-3 * std::max(1.0, std::abs(x));
    double left = x - lo, right = hi - x;
    if (left >= 2 * h && right >= 2 * h)
        return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
    if (right >= left) {
        h = fit_step(h, right);
        return (-25 * f(x) + 48 * f(x + h) - 36 * f(x + 2 * h) + 16 * f(x + 3 * h) - 3 * f(x + 4 * h)) / (12 * h);
    }
    h = fit_step(h, left);
    return (25 * f(x) - 48 * f(x - h) + 36 * f(x - 2 * h) - 16 * f(x - 3 * h) + 3 * f(x - 4 * h)) / (12 * h);
}

double ScalarFunction::second_derivative(double x, double lo, double hi) const
{
    if (d2f_) return d2f_(x);
    if (!(hi > lo)) throw DomainError("second_derivative: empty interval");
    const auto& f = f_;
    double h = 5e-3 * std::max(1.0, std::abs(x));
    double left = x - lo, right = hi - x;
    if (left >= 2 * h && right >= 2 * h)
        return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
    // six-point one-sided stencils, fourth order
    double sgn = right >= left ? 1.0 : -1.0;
    h = std::min(h, std::max(left, right) / 5.0);
    auto g = [&](int k) { return f(x + sgn * k * h); };
    return (45 * g(0) - 154 * g(1) + 214 * g(2) - 156 * g(3) + 61 * g(4) - 10 * g(5)) / (12 * h * h);
}

}  // namespace fracmarkov
