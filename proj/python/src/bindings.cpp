// Python bindings. Callables are only accepted where the library evaluates
// them on the calling thread; simulations and solvers take expression text.

#include "app.hpp"
#include "fracmarkov/errors.hpp"
#include "fracmarkov/expression.hpp"
#include "fracmarkov/fracops.hpp"
#include "fracmarkov/generators.hpp"
#include "fracmarkov/montecarlo.hpp"
#include "fracmarkov/solver.hpp"
#include "fracmarkov/specfun.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

namespace py = pybind11;
using namespace fracmarkov;

namespace {

using FunctionArg = std::variant<std::string, double, py::function>;

ScalarFunction as_function(const FunctionArg& f)
{
    if (auto* s = std::get_if<std::string>(&f)) return to_function(Expression::parse(*s));
    if (auto* c = std::get_if<double>(&f)) return ScalarFunction::constant(*c);
    py::function fn = std::get<py::function>(f);
    return ScalarFunction([fn](double x) { return fn(x).cast<double>(); });
}

// text only: used off the calling thread
ScalarFunction expression_function(const std::string& text) { return to_function(Expression::parse(text)); }

template <typename E>
E lookup(const std::string& key, std::initializer_list<std::pair<const char*, E>> table, const char* what)
{
    for (const auto& [k, v] : table)
        if (key == k) return v;
    throw ConfigError(std::string("unknown ") + what + " '" + key + "'");
}

JumpSide jump_side(const std::string& s)
{
    return lookup<JumpSide>(s, {{"negative", JumpSide::Negative}, {"positive", JumpSide::Positive}}, "side");
}

Side deriv_side(const std::string& s) { return lookup<Side>(s, {{"right", Side::Right}, {"left", Side::Left}}, "side"); }

BoundaryMode boundary_mode(const std::string& s)
{
    return lookup<BoundaryMode>(s,
                                {{"stopped", BoundaryMode::Stopped},
                                 {"interrupted", BoundaryMode::Interrupted},
                                 {"killed", BoundaryMode::Killed}},
                                "mode");
}

SimParams sim_params(long paths, double truncation, std::uint64_t seed, double lambda, double t_max, int threads)
{
    SimParams p;
    p.paths = paths;
    p.h = truncation;
    p.seed = seed;
    p.lambda = lambda;
    p.t_max = t_max;
    p.threads = threads;
    p.validate();
    return p;
}

py::dict estimate(const Estimate& e) { return py::dict(py::arg("value") = e.value, py::arg("se") = e.se); }

py::dict table(const SolutionTable& t)
{
    return py::dict(py::arg("grid") = t.grid, py::arg("values") = t.values, py::arg("se") = t.se,
                    py::arg("method") = to_string(t.method), py::arg("residual") = t.residual);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.attr("__version__") = FRACMARKOV_VERSION;

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", error);
    py::register_exception<ConfigError>(m, "ConfigError", error);
    py::register_exception<CensoringError>(m, "CensoringError", error);

    m.def("gamma", &fracmarkov::gamma);
    m.def("mittag_leffler", &mittag_leffler, py::arg("beta"), py::arg("z"));
    m.def("stable_exit_prob", &stable_exit_prob, py::arg("beta"), py::arg("x"));
    m.def("stable_occupation_density", &stable_occupation_density, py::arg("beta"), py::arg("x"), py::arg("y"));
    m.def("stable_mean_exit_time", &stable_mean_exit_time, py::arg("beta"), py::arg("x"));

    m.def(
        "frac_derivative",
        [](const FunctionArg& f, double anchor, double beta, double x, const std::string& kind,
           const std::string& side) {
            auto k = lookup<DerivativeKind>(
                kind, {{"caputo", DerivativeKind::Caputo}, {"rl", DerivativeKind::RiemannLiouville}}, "kind");
            return frac_derivative(as_function(f), anchor, FracOrder(beta), x, k, deriv_side(side));
        },
        py::arg("f"), py::arg("anchor"), py::arg("beta"), py::arg("x"), py::arg("kind") = "caputo",
        py::arg("side") = "right");
    m.def(
        "frac_integral",
        [](const FunctionArg& f, double a, double beta, double x) { return frac_integral(as_function(f), a, beta, x); },
        py::arg("f"), py::arg("a"), py::arg("beta"), py::arg("x"));
    m.def(
        "generator_derivative",
        [](const FunctionArg& f, double beta, double x, const std::string& side) {
            return generator_derivative(as_function(f), FracOrder(beta), x, deriv_side(side));
        },
        py::arg("f"), py::arg("beta"), py::arg("x"), py::arg("side") = "right");

    py::class_<JumpKernel>(m, "JumpKernel")
        .def_readonly("name", &JumpKernel::name)
        .def("__call__", [](const JumpKernel& k, double x, double y) { return k(x, y); });

    m.def(
        "stable_one_sided",
        [](double beta, const std::string& side, double scale) { return stable_one_sided(beta, jump_side(side), scale); },
        py::arg("beta"), py::arg("side") = "negative", py::arg("scale") = 1.0);
    m.def("stable_symmetric", &stable_symmetric, py::arg("beta"), py::arg("scale") = 1.0);
    m.def("tempered_stable", &tempered_stable, py::arg("beta"), py::arg("c"), py::arg("lambda_negative"),
          py::arg("lambda_positive"));
    m.def(
        "stable_like",
        [](double beta, const std::string& amplitude, double amplitude_max) {
            auto e = Expression::parse(amplitude);
            return stable_like(beta, [e](double x) { return e(x); }, amplitude_max);
        },
        py::arg("beta"), py::arg("amplitude"), py::arg("amplitude_max"));
    m.def(
        "mixed_caputo",
        [](const std::vector<std::tuple<double, double, std::string>>& terms) {
            std::vector<CaputoTerm> t;
            for (const auto& [w, b, s] : terms) t.push_back({w, b, jump_side(s)});
            return mixed_caputo(t);
        },
        py::arg("terms"), "terms: (weight, beta, side) tuples");
    m.def("no_jumps", &no_jumps);

    py::class_<GeneratorSpec>(m, "Generator")
        .def(py::init([](JumpKernel kernel, const std::string& drift, const std::string& mollifier) {
                 GeneratorSpec s;
                 s.kernel = std::move(kernel);
                 auto d = Expression::parse(drift);
                 if (d.is_constant())
                     s.drift = Drift::constant_value(d(0.0));
                 else
                     s.drift = Drift::function([d](double x) { return d(x); });
                 s.mollifier = lookup<Mollifier>(mollifier,
                                                 {{"indicator", Mollifier::Indicator},
                                                  {"cauchy", Mollifier::Cauchy},
                                                  {"unit", Mollifier::Unit}},
                                                 "mollifier");
                 return s;
             }),
             py::arg("kernel"), py::arg("drift") = "0", py::arg("mollifier") = "indicator");

    m.def(
        "apply_interrupted",
        [](const GeneratorSpec& g, double a, double b, const FunctionArg& f, double x) {
            return apply_interrupted(g, Interval{a, b}, as_function(f), x);
        },
        py::arg("generator"), py::arg("a"), py::arg("b"), py::arg("f"), py::arg("x"));
    m.def(
        "apply_killed",
        [](const GeneratorSpec& g, double a, double b, const FunctionArg& f, double x) {
            return apply_killed(g, Interval{a, b}, as_function(f), x);
        },
        py::arg("generator"), py::arg("a"), py::arg("b"), py::arg("f"), py::arg("x"));
    m.def(
        "apply_interrupted_order2",
        [](const GeneratorSpec& g, double a, double b, const FunctionArg& f, double x, bool regularized) {
            return apply_interrupted_order2(g, Interval{a, b}, as_function(f), x, regularized);
        },
        py::arg("generator"), py::arg("a"), py::arg("b"), py::arg("f"), py::arg("x"), py::arg("regularized") = true);

    m.def(
        "exit_statistics",
        [](const GeneratorSpec& g, double a, double b, double x0, const std::string& mode, long paths,
           double truncation, std::uint64_t seed, double lambda, double t_max, int threads) {
            ExitStatistics e;
            {
                py::gil_scoped_release nogil;
                e = exit_statistics(g, Interval{a, b}, boundary_mode(mode), x0,
                                    sim_params(paths, truncation, seed, lambda, t_max, threads));
            }
            py::dict d;
            d["n"] = e.n;
            d["p_left"] = estimate(e.p_left);
            d["p_right"] = estimate(e.p_right);
            d["p_censored"] = estimate(e.p_censored);
            d["mean_exit_time"] = estimate(e.mean_exit_time);
            d["disc_left"] = estimate(e.disc_left);
            d["disc_right"] = estimate(e.disc_right);
            d["censoring_warning"] = e.censoring_warning;
            return d;
        },
        py::arg("generator"), py::arg("a"), py::arg("b"), py::arg("x0"), py::arg("mode") = "stopped",
        py::arg("paths") = 10000, py::arg("truncation") = 1e-3, py::arg("seed") = 1, py::arg("lambda_") = 0.0,
        py::arg("t_max") = 100.0, py::arg("threads") = 0);

    m.def(
        "solve",
        [](const GeneratorSpec& g, double a, double b, double f_a, double f_b, const std::string& source,
           double lambda, const std::string& method, const std::vector<double>& grid, const std::string& form,
           int nodes, long paths, double truncation, std::uint64_t seed, int threads) {
            BvpProblem p;
            p.spec = g;
            p.region = {a, b};
            p.f_a = f_a;
            p.f_b = f_b;
            p.g = expression_function(source);
            p.lambda = lambda;
            p.form = lookup<OperatorForm>(form, {{"interrupted", OperatorForm::Interrupted}, {"killed", OperatorForm::Killed}},
                                          "form");
            auto how = lookup<SolveMethod>(method,
                                           {{"mc", SolveMethod::MonteCarlo},
                                            {"collocation", SolveMethod::Collocation},
                                            {"closed-form", SolveMethod::ClosedForm}},
                                           "method");
            SolutionTable t;
            {
                py::gil_scoped_release nogil;
                p.validate();
                if (how == SolveMethod::MonteCarlo) {
                    t = solve_bvp_mc(p, sim_params(paths, truncation, seed, lambda, 100.0, threads), grid);
                } else if (how == SolveMethod::Collocation) {
                    auto c = solve_bvp_collocation(p, nodes);
                    if (grid.empty()) {
                        t = c;
                    } else {
                        t.method = c.method;
                        t.residual = c.residual;
                        t.grid = grid;
                        for (double x : grid) t.values.push_back(c.value_at(x));
                        t.se.assign(grid.size(), 0.0);
                    }
                } else {
                    throw ConfigError("closed-form: use solve_closed_form");
                }
            }
            return table(t);
        },
        py::arg("generator"), py::arg("a"), py::arg("b"), py::arg("f_a") = 0.0, py::arg("f_b") = 0.0,
        py::arg("source") = "0", py::arg("lambda_") = 0.0, py::arg("method") = "collocation",
        py::arg("grid") = std::vector<double>{}, py::arg("form") = "interrupted", py::arg("nodes") = 128,
        py::arg("paths") = 10000, py::arg("truncation") = 1e-3, py::arg("seed") = 1, py::arg("threads") = 0);

    m.def(
        "solve_closed_form",
        [](double beta, double f_a, double f_b, const std::string& source, const std::vector<double>& grid) {
            return table(solve_bvp_closed_form(beta, f_a, f_b, expression_function(source), grid));
        },
        py::arg("beta"), py::arg("f_a"), py::arg("f_b"), py::arg("source"), py::arg("grid"));

    m.def(
        "run_config",
        [](const std::string& yaml, const std::string& output) {
            auto c = app::parse_config(yaml);
            if (!output.empty()) c.output = output;
            app::RunResult r;
            {
                py::gil_scoped_release nogil;
                r = app::run(c);
            }
            return py::make_tuple(r.status, r.message);
        },
        py::arg("yaml"), py::arg("output") = "",
        "Runs a configuration like the command-line tool; returns (exit_code, message).");
}
