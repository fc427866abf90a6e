#include "fracmarkov/fracops.hpp"

#include "fracmarkov/detail/local_expansion.hpp"
#include "fracmarkov/errors.hpp"
#include "fracmarkov/quadrature.hpp"
#include "fracmarkov/specfun.hpp"

#include <cmath>
#include <string>

namespace fracmarkov {

FracOrder::FracOrder(double beta) : beta_(beta)
{
    if (!(beta > 0.0 && beta < 2.0) || beta == 1.0)
        throw DomainError("fractional order must lie in (0,1) or (1,2), got " + std::to_string(beta));
}

double frac_integral(const ScalarFunction& f, double a, double beta, double x)
{
    if (!(beta > 0.0)) throw DomainError("frac_integral: order must be positive");
    if (!(x > a)) throw DomainError("frac_integral: requires x > a");
    // s = (x - t)^beta turns the weight into Lebesgue measure.
    double upper = std::pow(x - a, beta);
    double inv = 1.0 / beta;
    auto g = [&](double s) { return f(x - std::pow(s, inv)); };
    return quad::gk(g, 0.0, upper, 1e-13, 16) / gamma(beta + 1.0);
}

namespace {

// int_0^L [f(x + s z) - f(x) - [beta > 1] s f'(x) z] z^(-1-beta) dz.
// The near part [0, delta] uses the Chebyshev expansion; the remainder is
// regular. L may be infinite.
struct SingularIntegral {
    double value;
    double slope;  // derivative along s at x, consistent with the near part
};

SingularIntegral singular_integral(const ScalarFunction& f, double x, double s, double beta, double length,
                                   double delta_max, double tol)
{
    detail::LocalExpansion ex(f, x, s, delta_max);
    double delta = ex.delta();
    bool second = beta > 1.0;
    auto w = [beta](double z) { return std::pow(z, -1.0 - beta); };
    double near = second ? detail::near_zero_integral([&](double z) { return ex.second(z); }, w, delta, 2.0, beta, tol)
                         : detail::near_zero_integral([&](double z) { return ex.first(z); }, w, delta, 1.0, beta, tol);
    double fx = ex.value0();
    double slope = ex.slope();
    auto diff = [&](double z) { return (f(x + s * z) - fx) * w(z); };
    double reach = std::min(length, std::max(10.0, 100.0 * delta));
    double far = quad::gk(diff, delta, reach, tol, 14);
    if (std::isinf(length)) {
        // z = reach u^(-1/beta): z^(-1-beta) dz = reach^(-beta)/beta du.
        auto tail = [&](double u) {
            if (u <= 0.0) return 0.0;
            double z = reach * std::pow(u, -1.0 / beta);
            double v = f(x + s * z);
            return std::isfinite(v) ? v : 0.0;
        };
        double err = 0.0;
        double t = quad::gk(tail, 0.0, 1.0, tol, 14, &err);
        double scale = std::pow(reach, -beta) / beta;
        if (err * scale > 1e3 * tol * std::max(1.0, std::abs(fx)))
            throw ConvergenceError("generator_derivative: tail integral did not converge");
        far += (t - fx) * scale;
    } else if (length > reach) {
        far += quad::gk(diff, reach, length, tol, 14);
    }
    double value = near + far;
    if (second) {
        // subtract s f'(x) int_delta^L z^(-beta) dz analytically
        double upper = std::isinf(length) ? 0.0 : std::pow(length, 1.0 - beta);
        value -= slope * (upper - std::pow(delta, 1.0 - beta)) / (1.0 - beta);
    }
    return {value, slope};
}

}  // namespace

double frac_derivative(const ScalarFunction& f, double anchor, FracOrder order, double x, DerivativeKind kind,
                       Side side)
{
    double beta = order.value();
    if (side == Side::Right && !(x > anchor)) throw DomainError("frac_derivative: right derivative needs x > anchor");
    if (side == Side::Left && !(x < anchor)) throw DomainError("frac_derivative: left derivative needs x < anchor");
    if (!order.below_one() && f.smoothness() != Smoothness::C2)
        throw SmoothnessError("frac_derivative: order above one needs a C2 function");
    double s = side == Side::Right ? -1.0 : 1.0;
    double len = std::abs(x - anchor);
    double lo = std::min(x, anchor), hi = std::max(x, anchor);
    double delta = len / 10.0;
    auto si = singular_integral(f, x, s, beta, len, delta, 1e-12);
    double fx = f(x);
    bool caputo = kind == DerivativeKind::Caputo;
    double fa = caputo ? f(anchor) : 0.0;
    double result = si.value / gamma(-beta) + (fx - fa) * std::pow(len, -beta) / gamma(1.0 - beta);
    if (!order.below_one()) {
        // s * slope is f'(x); the boundary term carries the sign of -s.
        double dfx = f.has_derivative() ? f.derivative(x) : s * si.slope;
        double dfa = caputo ? f.derivative(anchor, lo, hi) : 0.0;
        result += -s * (beta * dfx - dfa) * std::pow(len, 1.0 - beta) / gamma(2.0 - beta);
    }
    return result;
}

double generator_derivative(const ScalarFunction& f, FracOrder order, double x, Side side, double tol)
{
    double beta = order.value();
    if (!order.below_one() && f.smoothness() != Smoothness::C2)
        throw SmoothnessError("generator_derivative: order above one needs a C2 function");
    double s = side == Side::Right ? -1.0 : 1.0;
    double delta = 0.1 * std::max(1.0, std::abs(x) * 1e-3);
    auto si = singular_integral(f, x, s, beta, std::numeric_limits<double>::infinity(), delta,
                                std::min(1e-12, tol));
    return si.value / gamma(-beta);
}

double mixed_operator(const ScalarFunction& f, std::span<const MixedTerm> terms, double x)
{
    double sum = 0.0;
    for (const auto& t : terms) {
        if (!(t.weight > 0.0)) throw DomainError("mixed_operator: weights must be positive");
        sum -= t.weight * frac_derivative(f, t.anchor, t.order, x, DerivativeKind::Caputo, t.side);
    }
    return sum;
}

}  // namespace fracmarkov
