#include "fracmarkov/kernel.hpp"

#include "fracmarkov/errors.hpp"
#include "fracmarkov/quadrature.hpp"
#include "fracmarkov/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fracmarkov {

double mollifier_value(Mollifier m, double z)
{
    switch (m) {
    case Mollifier::Indicator: return std::abs(z) <= 1.0 ? 1.0 : 0.0;
    case Mollifier::Cauchy: return 1.0 / (1.0 + z * z);
    case Mollifier::Unit: return 1.0;
    }
    return 1.0;
}

PowerLawMajorant::PowerLawMajorant(std::vector<PowerLawTerm> terms) : terms_(std::move(terms))
{
    for (const auto& t : terms_) {
        if (!(t.coeff > 0.0)) throw DomainError("majorant coefficients must be positive");
        if (!(t.alpha > 0.0 && t.alpha < 2.0)) throw DomainError("majorant exponents must lie in (0,2)");
    }
}

double PowerLawMajorant::density(double y) const
{
    if (y == 0.0) return std::numeric_limits<double>::infinity();
    JumpSide side = y < 0.0 ? JumpSide::Negative : JumpSide::Positive;
    double r = std::abs(y), sum = 0.0;
    for (const auto& t : terms_)
        if (t.side == side) sum += t.coeff * std::pow(r, -1.0 - t.alpha);
    return sum;
}

double PowerLawMajorant::tail(JumpSide side, double r) const
{
    double sum = 0.0;
    for (const auto& t : terms_)
        if (t.side == side) sum += t.coeff * std::pow(r, -t.alpha) / t.alpha;
    return sum;
}

bool PowerLawMajorant::empty(JumpSide side) const
{
    return std::none_of(terms_.begin(), terms_.end(), [side](const PowerLawTerm& t) { return t.side == side; });
}

double PowerLawMajorant::near_exponent(JumpSide side) const
{
    double a = 0.0;
    for (const auto& t : terms_)
        if (t.side == side) a = std::max(a, t.alpha);
    return a;
}

double PowerLawMajorant::far_exponent(JumpSide side) const
{
    double a = 0.0;
    for (const auto& t : terms_)
        if (t.side == side) a = (a == 0.0) ? t.alpha : std::min(a, t.alpha);
    return a;
}

double JumpKernel::tail_mass(double x, double r, JumpSide side) const
{
    if (majorant.empty(side)) return 0.0;
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    if (std::isinf(r)) return 0.0;
    if (tail_integral) return tail_integral(x, r, side);
    double s = side == JumpSide::Negative ? -1.0 : 1.0;
    double alpha = majorant.far_exponent(side);
    // z = r u^(-1/alpha) flattens a z^(-1-alpha) tail
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        double z = r * std::pow(u, -1.0 / alpha);
        double v = density(x, s * z) * (r / alpha) * std::pow(u, -1.0 / alpha - 1.0);
        return std::isfinite(v) ? v : 0.0;
    };
    return quad::tanh_sinh(g, 0.0, 1.0, 1e-12);
}

namespace {

void check_beta(double beta)
{
    if (!(beta > 0.0 && beta < 2.0) || beta == 1.0)
        throw DomainError("kernel order must lie in (0,1) or (1,2), got " + std::to_string(beta));
}

OrderClass class_of(double beta) { return beta < 1.0 ? OrderClass::BoundedVariation : OrderClass::Compensated; }

double side_sign(JumpSide s) { return s == JumpSide::Negative ? -1.0 : 1.0; }

}  // namespace

JumpKernel no_jumps()
{
    JumpKernel k;
    k.density = [](double, double) { return 0.0; };
    k.state_independent = true;
    k.equals_majorant = true;
    k.name = "none";
    return k;
}

JumpKernel stable_one_sided(double beta, JumpSide side, double scale)
{
    check_beta(beta);
    if (!(scale > 0.0)) throw DomainError("stable_one_sided: scale must be positive");
    double c = scale * (beta < 1.0 ? beta / gamma(1.0 - beta) : 1.0 / gamma(-beta));
    double sgn = side_sign(side);
    JumpKernel k;
    k.density = [c, beta, sgn](double, double y) { return y * sgn > 0.0 ? c * std::pow(std::abs(y), -1.0 - beta) : 0.0; };
    k.order_class = class_of(beta);
    k.majorant = PowerLawMajorant({{side, c, beta}});
    k.state_independent = true;
    k.equals_majorant = true;
    k.tail_integral = [c, beta, side](double, double r, JumpSide s) {
        return s == side ? c * std::pow(r, -beta) / beta : 0.0;
    };
    k.name = "stable_one_sided";
    return k;
}

JumpKernel stable_symmetric(double beta, double scale)
{
    check_beta(beta);
    if (!(scale > 0.0)) throw DomainError("stable_symmetric: scale must be positive");
    double c = scale / (-2.0 * gamma(-beta) * std::cos(M_PI * beta / 2.0));
    JumpKernel k;
    k.density = [c, beta](double, double y) { return y != 0.0 ? c * std::pow(std::abs(y), -1.0 - beta) : 0.0; };
    k.order_class = class_of(beta);
    k.majorant = PowerLawMajorant({{JumpSide::Negative, c, beta}, {JumpSide::Positive, c, beta}});
    k.state_independent = true;
    k.equals_majorant = true;
    k.tail_integral = [c, beta](double, double r, JumpSide) { return c * std::pow(r, -beta) / beta; };
    k.name = "stable_symmetric";
    return k;
}

JumpKernel mixed_caputo(std::span<const CaputoTerm> terms)
{
    if (terms.empty()) throw DomainError("mixed_caputo: no terms");
    std::vector<PowerLawTerm> pl;
    for (const auto& t : terms) {
        if (!(t.beta > 0.0 && t.beta < 1.0)) throw DomainError("mixed_caputo: orders must lie in (0,1)");
        if (!(t.weight > 0.0)) throw DomainError("mixed_caputo: weights must be positive");
        pl.push_back({t.side, t.weight * t.beta / gamma(1.0 - t.beta), t.beta});
    }
    JumpKernel k;
    k.majorant = PowerLawMajorant(pl);
    k.density = [pl](double, double y) {
        if (y == 0.0) return 0.0;
        JumpSide side = y < 0.0 ? JumpSide::Negative : JumpSide::Positive;
        double r = std::abs(y), sum = 0.0;
        for (const auto& t : pl)
            if (t.side == side) sum += t.coeff * std::pow(r, -1.0 - t.alpha);
        return sum;
    };
    k.order_class = OrderClass::BoundedVariation;
    k.state_independent = true;
    k.equals_majorant = true;
    PowerLawMajorant m = k.majorant;
    k.tail_integral = [m](double, double r, JumpSide s) { return m.tail(s, r); };
    k.name = "mixed_caputo";
    return k;
}

JumpKernel stable_like(double beta, std::function<double(double)> amplitude, double amplitude_max)
{
    check_beta(beta);
    if (!(amplitude_max > 0.0)) throw DomainError("stable_like: amplitude bound must be positive");
    JumpKernel k;
    k.density = [beta, amplitude](double x, double y) {
        return y != 0.0 ? amplitude(x) * std::pow(std::abs(y), -1.0 - beta) : 0.0;
    };
    k.order_class = class_of(beta);
    k.majorant = PowerLawMajorant({{JumpSide::Negative, amplitude_max, beta}, {JumpSide::Positive, amplitude_max, beta}});
    k.tail_integral = [beta, amplitude](double x, double r, JumpSide) { return amplitude(x) * std::pow(r, -beta) / beta; };
    k.name = "stable_like";
    return k;
}

JumpKernel tempered_stable(double beta, double c, double lambda_negative, double lambda_positive)
{
    check_beta(beta);
    if (!(c > 0.0)) throw DomainError("tempered_stable: c must be positive");
    if (!(lambda_negative >= 0.0 && lambda_positive >= 0.0)) throw DomainError("tempered_stable: rates must be >= 0");
    JumpKernel k;
    k.density = [=](double, double y) {
        if (y == 0.0) return 0.0;
        double lam = y < 0.0 ? lambda_negative : lambda_positive;
        return c * std::exp(-lam * std::abs(y)) * std::pow(std::abs(y), -1.0 - beta);
    };
    k.order_class = class_of(beta);
    k.majorant = PowerLawMajorant({{JumpSide::Negative, c, beta}, {JumpSide::Positive, c, beta}});
    k.state_independent = true;
    k.equals_majorant = lambda_negative == 0.0 && lambda_positive == 0.0;
    k.name = "tempered_stable";
    return k;
}

}  // namespace fracmarkov
