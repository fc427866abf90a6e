#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracmarkov {

enum class JumpSide { Negative, Positive };
enum class OrderClass { BoundedVariation, Compensated };
enum class Mollifier { Indicator, Cauchy, Unit };

double mollifier_value(Mollifier m, double z);

// coeff * |y|^(-1-alpha) on one side.
struct PowerLawTerm {
    JumpSide side;
    double coeff;
    double alpha;
};

class PowerLawMajorant {
public:
    PowerLawMajorant() = default;
    explicit PowerLawMajorant(std::vector<PowerLawTerm> terms);

    const std::vector<PowerLawTerm>& terms() const { return terms_; }
    double density(double y) const;
    // integral over the side beyond distance r
    double tail(JumpSide side, double r) const;
    // integral over |y| > h
    double mass_beyond(double h) const { return tail(JumpSide::Negative, h) + tail(JumpSide::Positive, h); }
    bool empty(JumpSide side) const;
    // largest alpha on the side (controls behaviour at 0); 0 if empty
    double near_exponent(JumpSide side) const;
    // smallest alpha on the side (controls decay at infinity); 0 if empty
    double far_exponent(JumpSide side) const;

private:
    std::vector<PowerLawTerm> terms_;
};

struct JumpKernel {
    std::function<double(double x, double y)> density;
    OrderClass order_class = OrderClass::BoundedVariation;
    PowerLawMajorant majorant;
    // density(x, y) does not depend on x
    bool state_independent = false;
    // density coincides with the majorant (no thinning needed)
    bool equals_majorant = false;
    // optional closed form of the mass beyond distance r on one side
    std::function<double(double x, double r, JumpSide side)> tail_integral;
    std::string name = "custom";

    double operator()(double x, double y) const { return density(x, y); }
    // mass of nu(x, .) on the side beyond r > 0
    double tail_mass(double x, double r, JumpSide side) const;
};

struct Drift {
    std::function<double(double)> fn;
    double constant = 0.0;

    static Drift none() { return {}; }
    static Drift constant_value(double v) { return {{}, v}; }
    static Drift function(std::function<double(double)> f) { return {std::move(f), 0.0}; }

    bool is_constant() const { return !fn; }
    bool is_zero() const { return !fn && constant == 0.0; }
    double operator()(double x) const { return fn ? fn(x) : constant; }
};

struct GeneratorSpec {
    Drift drift;
    std::function<double(double)> diffusion;  // must vanish where evaluated
    JumpKernel kernel;
    Mollifier mollifier = Mollifier::Indicator;
};

// Named kernels.

// One-sided beta-stable: beta/Gamma(1-beta) |y|^(-1-beta) (beta < 1) or
// 1/Gamma(-beta) |y|^(-1-beta) (beta in (1,2)) on the given side, times scale.
// With negative jumps and beta < 1 the interval operator is minus the
// Caputo derivative anchored at the left end.
JumpKernel stable_one_sided(double beta, JumpSide side, double scale = 1.0);

// Zero kernel, for pure-drift models.
JumpKernel no_jumps();

// Symmetric beta-stable with characteristic exponent scale * |xi|^beta.
JumpKernel stable_symmetric(double beta, double scale = 1.0);

// Sum of one-sided Caputo kernels: weight * beta/Gamma(1-beta) |y|^(-1-beta),
// negative jumps for right-anchored terms, positive for left-anchored ones.
struct CaputoTerm {
    double weight;
    double beta;
    JumpSide side;
};
JumpKernel mixed_caputo(std::span<const CaputoTerm> terms);

// a(x) |y|^(-1-beta), both sides; a_max bounds a.
JumpKernel stable_like(double beta, std::function<double(double)> amplitude, double amplitude_max);

// c exp(-lambda_side |y|) |y|^(-1-beta).
JumpKernel tempered_stable(double beta, double c, double lambda_negative, double lambda_positive);

}  // namespace fracmarkov
