#include "fracmarkov/expression.hpp"

#include "fracmarkov/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdlib>

namespace fracmarkov {

namespace {

enum class Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Exp, Abs, Pow, Min, Max, Indicator, Sin, Cos, Log, Sqrt };

struct FnInfo {
    const char* name;
    Fn fn;
    int min_args, max_args;
};

constexpr std::array<FnInfo, 10> kFunctions{{
    {"exp", Fn::Exp, 1, 1},
    {"abs", Fn::Abs, 1, 1},
    {"pow", Fn::Pow, 2, 2},
    {"min", Fn::Min, 2, 64},
    {"max", Fn::Max, 2, 64},
    {"indicator", Fn::Indicator, 1, 3},
    {"sin", Fn::Sin, 1, 1},
    {"cos", Fn::Cos, 1, 1},
    {"log", Fn::Log, 1, 1},
    {"sqrt", Fn::Sqrt, 1, 1},
}};

const char* fn_name(Fn f)
{
    for (auto& i : kFunctions)
        if (i.fn == f) return i.name;
    return "?";
}

struct Node {
    Kind kind;
    Fn fn = Fn::Exp;
    double num = 0.0;
    int var = -1;
    std::vector<int> kids;
};

std::string format_number(double v)
{
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

struct Expression::Tree {
    std::vector<Node> nodes;
    int root = -1;
    std::vector<std::string> vars;

    int add(Node n)
    {
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size()) - 1;
    }

    bool is_num(int i, double v) const { return nodes[i].kind == Kind::Num && nodes[i].num == v; }
    bool is_num(int i) const { return nodes[i].kind == Kind::Num; }

    // constructors with light folding, used by the parser and by derivative()
    int num(double v) { return add({Kind::Num, Fn::Exp, v, -1, {}}); }
    int var(int k) { return add({Kind::Var, Fn::Exp, 0.0, k, {}}); }
    int neg(int a)
    {
        if (is_num(a)) return num(-nodes[a].num);
        if (nodes[a].kind == Kind::Neg) return nodes[a].kids[0];
        return add({Kind::Neg, Fn::Exp, 0.0, -1, {a}});
    }
    int bin(Kind k, int a, int b) { return add({k, Fn::Exp, 0.0, -1, {a, b}}); }
    int plus(int a, int b)
    {
        if (is_num(a, 0.0)) return b;
        if (is_num(b, 0.0)) return a;
        return bin(Kind::Add, a, b);
    }
    int minus(int a, int b)
    {
        if (is_num(b, 0.0)) return a;
        if (is_num(a, 0.0)) return neg(b);
        return bin(Kind::Sub, a, b);
    }
    int times(int a, int b)
    {
        if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
        if (is_num(a, 1.0)) return b;
        if (is_num(b, 1.0)) return a;
        return bin(Kind::Mul, a, b);
    }
    int over(int a, int b)
    {
        if (is_num(a, 0.0)) return num(0.0);
        if (is_num(b, 1.0)) return a;
        return bin(Kind::Div, a, b);
    }
    int power(int a, int b)
    {
        if (is_num(b, 1.0)) return a;
        if (is_num(b, 0.0)) return num(1.0);
        return bin(Kind::Pow, a, b);
    }
    int call(Fn f, std::vector<int> args) { return add({Kind::Call, f, 0.0, -1, std::move(args)}); }

    double eval(int i, std::span<const double> v) const
    {
        const Node& n = nodes[i];
        switch (n.kind) {
        case Kind::Num: return n.num;
        case Kind::Var: return v[n.var];
        case Kind::Neg: return -eval(n.kids[0], v);
        case Kind::Add: return eval(n.kids[0], v) + eval(n.kids[1], v);
        case Kind::Sub: return eval(n.kids[0], v) - eval(n.kids[1], v);
        case Kind::Mul: return eval(n.kids[0], v) * eval(n.kids[1], v);
        case Kind::Div: return eval(n.kids[0], v) / eval(n.kids[1], v);
        case Kind::Pow: return power_value(eval(n.kids[0], v), n.kids[1], v);
        case Kind::Call: break;
        }
        auto arg = [&](std::size_t k) { return eval(n.kids[k], v); };
        switch (n.fn) {
        case Fn::Exp: return std::exp(arg(0));
        case Fn::Abs: return std::abs(arg(0));
        case Fn::Pow: return power_value(arg(0), n.kids[1], v);
        case Fn::Min: {
            double m = arg(0);
            for (std::size_t k = 1; k < n.kids.size(); ++k) m = std::min(m, arg(k));
            return m;
        }
        case Fn::Max: {
            double m = arg(0);
            for (std::size_t k = 1; k < n.kids.size(); ++k) m = std::max(m, arg(k));
            return m;
        }
        case Fn::Indicator: {
            double u = arg(0);
            if (n.kids.size() == 1) return u > 0.0 ? 1.0 : 0.0;
            double lo = arg(1), hi = n.kids.size() > 2 ? arg(2) : INFINITY;
            return (u >= lo && u <= hi) ? 1.0 : 0.0;
        }
        case Fn::Sin: return std::sin(arg(0));
        case Fn::Cos: return std::cos(arg(0));
        case Fn::Log: return std::log(arg(0));
        case Fn::Sqrt: return std::sqrt(arg(0));
        }
        return NAN;
    }

    // small integer exponents by multiplication: exact for negative bases
    double power_value(double base, int exponent_node, std::span<const double> v) const
    {
        double e = eval(exponent_node, v);
        if (e == 2.0) return base * base;
        if (e == 1.0) return base;
        return std::pow(base, e);
    }

    bool uses(int i, int k) const
    {
        const Node& n = nodes[i];
        if (n.kind == Kind::Var) return k < 0 || n.var == k;
        for (int c : n.kids)
            if (uses(c, k)) return true;
        return false;
    }

    bool smooth(int i) const
    {
        const Node& n = nodes[i];
        if (n.kind == Kind::Call &&
            (n.fn == Fn::Abs || n.fn == Fn::Min || n.fn == Fn::Max || n.fn == Fn::Indicator))
            return false;
        for (int c : n.kids)
            if (!smooth(c)) return false;
        return true;
    }

    // derivative of node i, appended to this tree
    int diff(int i, int k)
    {
        const Node n = nodes[i];
        switch (n.kind) {
        case Kind::Num: return num(0.0);
        case Kind::Var: return num(n.var == k ? 1.0 : 0.0);
        case Kind::Neg: return neg(diff(n.kids[0], k));
        case Kind::Add: return plus(diff(n.kids[0], k), diff(n.kids[1], k));
        case Kind::Sub: return minus(diff(n.kids[0], k), diff(n.kids[1], k));
        case Kind::Mul: {
            int a = n.kids[0], b = n.kids[1];
            return plus(times(diff(a, k), b), times(a, diff(b, k)));
        }
        case Kind::Div: {
            int a = n.kids[0], b = n.kids[1];
            return over(minus(times(diff(a, k), b), times(a, diff(b, k))), times(b, b));
        }
        case Kind::Pow: return diff_pow(i, n.kids[0], n.kids[1], k);
        case Kind::Call: break;
        }
        int u = n.kids[0];
        switch (n.fn) {
        case Fn::Exp: return times(i, diff(u, k));
        case Fn::Pow: return diff_pow(i, u, n.kids[1], k);
        case Fn::Sin: return times(call(Fn::Cos, {u}), diff(u, k));
        case Fn::Cos: return neg(times(call(Fn::Sin, {u}), diff(u, k)));
        case Fn::Log: return over(diff(u, k), u);
        case Fn::Sqrt: return over(diff(u, k), times(num(2.0), i));
        default: throw DomainError(std::string("no derivative for ") + fn_name(n.fn));
        }
    }

    int diff_pow(int self, int u, int e, int k)
    {
        if (!uses(e, k)) {
            // e u^(e-1) u'
            int em1 = is_num(e) ? num(nodes[e].num - 1.0) : minus(e, num(1.0));
            return times(times(e, power(u, em1)), diff(u, k));
        }
        // u^e (e' log u + e u'/u)
        int inner = plus(times(diff(e, k), call(Fn::Log, {u})), over(times(e, diff(u, k)), u));
        return times(self, inner);
    }

    // precedence of the printed node
    int prec(int i) const
    {
        const Node& n = nodes[i];
        switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        case Kind::Num: return n.num < 0 || std::signbit(n.num) ? 3 : 5;
        default: return 5;
        }
    }

    std::string print(int i, int need) const
    {
        std::string s = print(i);
        return prec(i) < need ? "(" + s + ")" : s;
    }

    std::string print(int i) const
    {
        const Node& n = nodes[i];
        switch (n.kind) {
        case Kind::Num: return format_number(n.num);
        case Kind::Var: return vars[n.var];
        case Kind::Neg: return "-" + print(n.kids[0], 4);
        case Kind::Add: return print(n.kids[0], 1) + " + " + print(n.kids[1], 2);
        case Kind::Sub: return print(n.kids[0], 1) + " - " + print(n.kids[1], 2);
        case Kind::Mul: return print(n.kids[0], 2) + "*" + print(n.kids[1], 3);
        case Kind::Div: return print(n.kids[0], 2) + "/" + print(n.kids[1], 3);
        case Kind::Pow: return print(n.kids[0], 5) + "^" + print(n.kids[1], 3);
        case Kind::Call: break;
        }
        std::string s = std::string(fn_name(n.fn)) + "(";
        for (std::size_t k = 0; k < n.kids.size(); ++k) s += (k ? ", " : "") + print(n.kids[k]);
        return s + ")";
    }
};

namespace {

using Tree = Expression::Tree;

class Parser {
public:
    Parser(std::string_view s, Tree& t) : s_(s), t_(t) {}

    int parse()
    {
        int e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("expression \"" + std::string(s_) + "\": " + what + " at position " +
                          std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int expr()
    {
        int a = term();
        for (;;) {
            if (eat('+'))
                a = t_.bin(Kind::Add, a, term());
            else if (eat('-'))
                a = t_.bin(Kind::Sub, a, term());
            else
                return a;
        }
    }

    int term()
    {
        int a = unary();
        for (;;) {
            if (eat('*'))
                a = t_.bin(Kind::Mul, a, unary());
            else if (eat('/'))
                a = t_.bin(Kind::Div, a, unary());
            else
                return a;
        }
    }

    int unary()
    {
        if (eat('-')) return t_.add({Kind::Neg, Fn::Exp, 0.0, -1, {unary()}});
        if (eat('+')) return unary();
        int base = primary();
        if (eat('^')) return t_.bin(Kind::Pow, base, unary());
        return base;
    }

    int primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            int e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0;
            auto r = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (r.ec == std::errc::result_out_of_range)  // 1e999 stands for infinity
                v = std::strtod(std::string(s_.substr(pos_, r.ptr - s_.data() - pos_)).c_str(), nullptr);
            else if (r.ec != std::errc())
                fail("bad number");
            pos_ = static_cast<std::size_t>(r.ptr - s_.data());
            return t_.num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string id(s_.substr(start, pos_ - start));
            for (std::size_t k = 0; k < t_.vars.size(); ++k)
                if (t_.vars[k] == id) return t_.var(static_cast<int>(k));
            if (id == "pi") return t_.num(M_PI);
            for (auto& f : kFunctions) {
                if (id != f.name) continue;
                if (!eat('(')) fail("'" + id + "' needs arguments");
                std::vector<int> args{expr()};
                while (eat(',')) args.push_back(expr());
                if (!eat(')')) fail("missing ')'");
                int na = static_cast<int>(args.size());
                if (na < f.min_args || na > f.max_args) fail("wrong number of arguments to " + id);
                return t_.call(f.fn, std::move(args));
            }
            fail("unknown name '" + id + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    Tree& t_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression(number(0.0)) {}

Expression Expression::parse(std::string_view text, std::vector<std::string> variables)
{
    auto t = std::make_shared<Tree>();
    t->vars = std::move(variables);
    Parser p(text, *t);
    t->root = p.parse();
    return Expression(std::move(t));
}

Expression Expression::number(double c, std::vector<std::string> variables)
{
    auto t = std::make_shared<Tree>();
    t->vars = std::move(variables);
    t->root = t->num(c);
    return Expression(std::move(t));
}

double Expression::eval(std::span<const double> values) const
{
    if (values.size() < tree_->vars.size()) throw DomainError("expression needs more variable values");
    return tree_->eval(tree_->root, values);
}

double Expression::operator()(double x) const
{
    if (tree_->vars.size() > 1) throw DomainError("expression needs more variable values");
    std::array<double, 1> v{x};
    return tree_->eval(tree_->root, std::span<const double>(v.data(), std::max<std::size_t>(1, tree_->vars.size())));
}

double Expression::operator()(double x, double y) const
{
    std::array<double, 2> v{x, y};
    return tree_->eval(tree_->root, v);
}

Expression Expression::derivative(std::size_t variable) const
{
    if (variable >= tree_->vars.size()) throw DomainError("no such variable");
    auto t = std::make_shared<Tree>(*tree_);
    t->root = t->diff(t->root, static_cast<int>(variable));
    return Expression(std::move(t));
}

std::string Expression::str() const { return tree_->print(tree_->root); }

const std::vector<std::string>& Expression::variables() const { return tree_->vars; }

bool Expression::smooth() const { return tree_->smooth(tree_->root); }

bool Expression::depends_on(std::size_t variable) const { return tree_->uses(tree_->root, static_cast<int>(variable)); }

bool Expression::depends_on_any() const { return tree_->uses(tree_->root, -1); }

ScalarFunction to_function(const Expression& e)
{
    if (e.variables().size() != 1) throw DomainError("to_function needs an expression in one variable");
    if (!e.smooth()) return ScalarFunction([e](double x) { return e(x); }, Smoothness::Continuous);
    auto d1 = e.derivative();
    auto d2 = d1.derivative();
    ScalarFunction f([e](double x) { return e(x); }, Smoothness::C2);
    f.with_derivative([d1](double x) { return d1(x); }).with_second_derivative([d2](double x) { return d2(x); });
    return f;
}

}  // namespace fracmarkov
