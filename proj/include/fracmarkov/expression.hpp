#pragma once

#include "fracmarkov/function.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracmarkov {

// Arithmetic expressions in named variables:
//   + - * / ^ (right associative), unary minus, parentheses, numbers, pi,
//   exp abs pow min max indicator sin cos log sqrt.
// indicator(u) is 1 for u > 0; indicator(u, lo, hi) is 1 for lo <= u <= hi.
// Parse errors throw ConfigError.
class Expression {
public:
    Expression();
    static Expression parse(std::string_view text, std::vector<std::string> variables = {"x"});
    static Expression number(double c, std::vector<std::string> variables = {"x"});

    double eval(std::span<const double> values) const;
    double operator()(double x) const;
    double operator()(double x, double y) const;

    // Symbolic derivative in one variable; DomainError if the expression
    // uses abs, min, max or indicator.
    Expression derivative(std::size_t variable = 0) const;

    // Normalized text: parse(str()).str() == str().
    std::string str() const;
    const std::vector<std::string>& variables() const;
    // no abs, min, max or indicator
    bool smooth() const;
    bool depends_on(std::size_t variable) const;
    bool is_constant() const { return !depends_on_any(); }

    struct Tree;

private:
    explicit Expression(std::shared_ptr<const Tree> t) : tree_(std::move(t)) {}
    bool depends_on_any() const;
    std::shared_ptr<const Tree> tree_;
};

// f(x) with exact first and second derivatives when the expression is smooth.
ScalarFunction to_function(const Expression& e);

}  // namespace fracmarkov
