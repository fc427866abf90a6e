#pragma once

#include <functional>
#include <limits>

namespace fracmarkov {

enum class Smoothness { Continuous, C1, C2 };

// Real function of one variable with optional exact derivatives. Missing
// derivatives are replaced by fourth-order finite differences whose stencil
// stays inside [lo, hi].
class ScalarFunction {
public:
    using Fn = std::function<double(double)>;

    ScalarFunction() = default;
    ScalarFunction(Fn f, Smoothness s = Smoothness::C2) : f_(std::move(f)), smooth_(s) {}

    ScalarFunction& with_derivative(Fn df)
    {
        df_ = std::move(df);
        return *this;
    }
    ScalarFunction& with_second_derivative(Fn d2f)
    {
        d2f_ = std::move(d2f);
        return *this;
    }

    double operator()(double x) const { return f_(x); }
    explicit operator bool() const { return static_cast<bool>(f_); }

    Smoothness smoothness() const { return smooth_; }
    bool has_derivative() const { return static_cast<bool>(df_); }
    const Fn& function() const { return f_; }

    double derivative(double x, double lo = -kInf, double hi = kInf) const;
    double second_derivative(double x, double lo = -kInf, double hi = kInf) const;

    static ScalarFunction constant(double c)
    {
        ScalarFunction f([c](double) { return c; });
        f.with_derivative([](double) { return 0.0; }).with_second_derivative([](double) { return 0.0; });
        return f;
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    Fn f_;
    Fn df_;
    Fn d2f_;
    Smoothness smooth_ = Smoothness::C2;
};

}  // namespace fracmarkov
