#pragma once

#include "fracmarkov/function.hpp"

#include <span>
#include <vector>

namespace fracmarkov {

// Order in (0,1) or (1,2).
class FracOrder {
public:
    explicit FracOrder(double beta);
    double value() const { return beta_; }
    bool below_one() const { return beta_ < 1.0; }

private:
    double beta_;
};

enum class DerivativeKind { RiemannLiouville, Caputo };

// Right: anchored at a < x. Left: anchored at b > x.
enum class Side { Right, Left };

// I_a^beta f(x), any beta > 0.
double frac_integral(const ScalarFunction& f, double a, double beta, double x);

double frac_derivative(const ScalarFunction& f, double anchor, FracOrder beta, double x, DerivativeKind kind,
                       Side side);

// Whole-line derivative d^beta/dx^beta (Right) or d^beta/d(-x)^beta (Left).
double generator_derivative(const ScalarFunction& f, FracOrder beta, double x, Side side, double tol = 1e-10);

struct MixedTerm {
    double weight;
    FracOrder order;
    Side side;
    double anchor;
};

// -sum_j w_j D^{beta_j}_* f(x) over Caputo terms anchored left or right.
double mixed_operator(const ScalarFunction& f, std::span<const MixedTerm> terms, double x);

}  // namespace fracmarkov
