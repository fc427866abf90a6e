#include "app.hpp"

#include "fracmarkov/errors.hpp"
#include "fracmarkov/expression.hpp"
#include "fracmarkov/fracops.hpp"
#include "fracmarkov/generators.hpp"

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <Eigen/Core>
#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fracmarkov::app {

namespace {

struct Prepared {
    GeneratorSpec spec;
    Interval region;
    std::vector<double> grid;
    SimParams params;
};

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

JumpKernel build_kernel(const KernelConfig& k)
{
    if (k.name == "stable_one_sided") return stable_one_sided(k.beta, k.side, k.scale);
    if (k.name == "stable_symmetric") return stable_symmetric(k.beta, k.scale);
    if (k.name == "stable_like") {
        auto amp = Expression::parse(k.amplitude);
        return stable_like(k.beta, [amp](double x) { return amp(x); }, k.amplitude_max);
    }
    if (k.name == "tempered_stable") return tempered_stable(k.beta, k.c, k.lambda_negative, k.lambda_positive);
    if (k.name == "mixed_caputo") {
        std::vector<CaputoTerm> terms;
        for (auto& t : k.terms) terms.push_back({t.weight, t.beta, t.side});
        return mixed_caputo(terms);
    }
    if (k.name == "none") return no_jumps();
    // expression
    auto d = Expression::parse(k.density, {"x", "y"});
    std::vector<PowerLawTerm> maj;
    for (auto& m : k.majorant) {
        if (!(m.coeff > 0.0)) throw ConfigError("majorant coefficients must be positive");
        double hi = k.order_class == OrderClass::BoundedVariation ? 1.0 : 2.0;
        if (!(m.alpha > 0.0 && m.alpha < hi)) throw ConfigError("majorant exponents must lie in (0, 1) or (0, 2)");
        maj.push_back({m.side, m.coeff, m.alpha});
    }
    JumpKernel out;
    out.density = [d](double x, double y) { return d(x, y); };
    out.order_class = k.order_class;
    out.majorant = PowerLawMajorant(std::move(maj));
    out.state_independent = !d.depends_on(0);
    out.name = "expression";
    return out;
}

std::vector<double> build_grid(const GridConfig& g)
{
    if (!g.points.empty()) return g.points;
    if (!std::isfinite(g.from) || !std::isfinite(g.to))
        throw ConfigError("grid: the region is unbounded, give from/to or a list of points");
    if (g.count == 1) return {g.from};
    std::vector<double> v;
    for (int i = 0; i < g.count; ++i) v.push_back(i + 1 == g.count ? g.to : g.from + (g.to - g.from) * i / (g.count - 1));
    return v;
}

Prepared prepare(const RunConfig& c)
{
    Prepared p;
    p.region = {c.a, c.b};
    p.spec.kernel = build_kernel(c.kernel);
    auto drift = Expression::parse(c.drift);
    if (drift.is_constant())
        p.spec.drift = Drift::constant_value(drift(0.0));
    else
        p.spec.drift = Drift::function([drift](double x) { return drift(x); });
    p.spec.mollifier = c.mollifier;
    p.grid = build_grid(c.grid);

    p.params.h = c.truncation;
    p.params.paths = c.paths;
    p.params.t_max = c.t_max;
    p.params.seed = c.seed;
    p.params.lambda = c.lambda;
    p.params.small_jump_drift = c.small_jump_drift;
    p.params.gaussian_correction = c.gaussian_correction;
    p.params.validate();
    if (!(c.lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");

    auto inside = [&](double x, bool open) {
        return open ? (x > c.a && x < c.b) : (x >= c.a && x <= c.b);
    };
    switch (c.command) {
    case Command::Deriv:
        if (c.kind == DerivKind::Integral) {
            if (!(c.order > 0.0)) throw ConfigError("integral order must be positive");
        } else {
            FracOrder check(c.order);
        }
        break;
    case Command::Apply:
        for (double x : p.grid)
            if (!inside(x, false)) throw ConfigError("grid point " + num(x) + " lies outside the region");
        break;
    case Command::Simulate:
        if (c.mode == BoundaryMode::Free) throw ConfigError("simulate supports interrupted, stopped and killed modes");
        for (double x : p.grid)
            if (!inside(x, true)) throw ConfigError("starting point " + num(x) + " must lie inside the region");
        if (c.quantity == "occupation" && !(std::isfinite(c.a) && std::isfinite(c.b)))
            throw ConfigError("occupation histograms need a bounded region");
        break;
    case Command::Solve:
        if (!(std::isfinite(c.a) && std::isfinite(c.b))) throw ConfigError("solve needs a bounded region");
        for (double x : p.grid)
            if (!inside(x, false)) throw ConfigError("grid point " + num(x) + " lies outside the region");
        if (c.method == SolveMethod::ClosedForm) {
            if (c.kernel.name != "stable_symmetric" || c.kernel.scale != 1.0 || c.a != -1.0 || c.b != 1.0 ||
                c.lambda != 0.0 || !drift.is_constant() || drift(0.0) != 0.0 || c.form != OperatorForm::Interrupted)
                throw ConfigError("closed-form solutions need stable_symmetric with scale 1 on [-1, 1], "
                                  "zero drift, lambda 0 and the interrupted form");
        }
        if (c.method == SolveMethod::Collocation && c.nodes < 8) throw ConfigError("collocation needs nodes >= 8");
        if (c.method == SolveMethod::MonteCarlo && c.form == OperatorForm::Killed && (c.f_a != 0.0 || c.f_b != 0.0))
            throw ConfigError("killed-form Monte Carlo needs zero boundary data");
        break;
    case Command::Check:
        if (c.radii.size() < 2) throw ConfigError("check needs at least two radii");
        for (std::size_t i = 0; i < c.radii.size(); ++i)
            if (!(c.radii[i] > 0.0) || (i > 0 && !(c.radii[i] < c.radii[i - 1])))
                throw ConfigError("radii must be positive and strictly decreasing");
        break;
    }
    return p;
}

struct Output {
    std::string csv;
    std::vector<std::string> warnings;
    bool censored = false;
};

std::string xy_table(const std::vector<double>& x, const std::vector<double>& v, const std::vector<double>& se)
{
    std::string s = "x,value,se\n";
    for (std::size_t i = 0; i < x.size(); ++i) s += num(x[i]) + "," + num(v[i]) + "," + num(se[i]) + "\n";
    return s;
}

Output execute(const RunConfig& c, const Prepared& p)
{
    Output out;
    const auto& grid = p.grid;
    std::vector<double> vals, se(grid.size(), 0.0);
    switch (c.command) {
    case Command::Deriv: {
        auto f = to_function(Expression::parse(c.function));
        double anchor = c.anchor_set ? c.anchor : (c.side == Side::Right ? c.a : c.b);
        for (double x : grid) {
            bool before = c.side == Side::Right ? x < anchor : x > anchor;
            if (before && c.kind != DerivKind::Generator)
                throw ConfigError("grid point " + num(x) + " lies beyond the anchor " + num(anchor));
            if (x == anchor && c.kind != DerivKind::Generator) {
                // Caputo derivatives of C1 (order < 1) or C2 functions and
                // integrals vanish at the anchor; the RL value is singular
                // unless f vanishes there.
                if (c.kind == DerivKind::RiemannLiouville) {
                    vals.push_back(NAN);
                    out.warnings.push_back("Riemann-Liouville value at the anchor is not defined; wrote nan");
                } else {
                    vals.push_back(0.0);
                }
                continue;
            }
            switch (c.kind) {
            case DerivKind::Integral: vals.push_back(frac_integral(f, anchor, c.order, x)); break;
            case DerivKind::Generator: vals.push_back(generator_derivative(f, FracOrder(c.order), x, c.side)); break;
            default:
                vals.push_back(frac_derivative(f, anchor, FracOrder(c.order), x,
                                               c.kind == DerivKind::Caputo ? DerivativeKind::Caputo
                                                                           : DerivativeKind::RiemannLiouville,
                                               c.side));
            }
        }
        out.csv = xy_table(grid, vals, se);
        break;
    }
    case Command::Apply: {
        auto f = to_function(Expression::parse(c.function));
        for (double x : grid) {
            switch (c.op) {
            case OperatorChoice::Interrupted: vals.push_back(apply_interrupted(p.spec, p.region, f, x)); break;
            case OperatorChoice::Killed: vals.push_back(apply_killed(p.spec, p.region, f, x)); break;
            case OperatorChoice::Order2:
                vals.push_back(apply_interrupted_order2(p.spec, p.region, f, x, false));
                break;
            case OperatorChoice::Order2Regularized:
                vals.push_back(apply_interrupted_order2(p.spec, p.region, f, x, true));
                break;
            }
        }
        out.csv = xy_table(grid, vals, se);
        break;
    }
    case Command::Simulate: {
        std::ostringstream s;
        auto col = [&](const Estimate& e) { s << "," << num(e.value) << "," << num(e.se); };
        if (c.quantity == "exit") {
            s << "x,p_left,p_left_se,p_right,p_right_se,p_censored,p_censored_se,mean_exit_time,mean_exit_time_se,"
                 "disc_left,disc_left_se,disc_right,disc_right_se\n";
            for (double x : grid) {
                auto e = exit_statistics(p.spec, p.region, c.mode, x, p.params);
                s << num(x);
                for (auto* est : {&e.p_left, &e.p_right, &e.p_censored, &e.mean_exit_time, &e.disc_left, &e.disc_right})
                    col(*est);
                s << "\n";
                if (e.censoring_warning) {
                    out.censored = true;
                    out.warnings.push_back("more than 1% of paths censored at x = " + num(x));
                }
            }
        } else {
            s << "x,bin_lo,bin_hi,mass,mass_se\n";
            for (double x : grid) {
                auto h = occupation_histogram(p.spec, p.region, c.mode, x, p.params, c.bins);
                for (int k = 0; k < c.bins; ++k)
                    s << num(x) << "," << num(h.edges[k]) << "," << num(h.edges[k + 1]) << "," << num(h.mass[k].value)
                      << "," << num(h.mass[k].se) << "\n";
                if (h.exits.censoring_warning) {
                    out.censored = true;
                    out.warnings.push_back("more than 1% of paths censored at x = " + num(x));
                }
            }
        }
        out.csv = s.str();
        break;
    }
    case Command::Solve: {
        BvpProblem prob;
        prob.spec = p.spec;
        prob.region = p.region;
        prob.f_a = c.f_a;
        prob.f_b = c.f_b;
        prob.g = to_function(Expression::parse(c.source));
        prob.lambda = c.lambda;
        prob.form = c.form;
        SolutionTable t;
        switch (c.method) {
        case SolveMethod::MonteCarlo: t = solve_bvp_mc(prob, p.params, grid); break;
        case SolveMethod::ClosedForm: t = solve_bvp_closed_form(c.kernel.beta, c.f_a, c.f_b, prob.g, grid); break;
        case SolveMethod::Collocation: {
            auto col = solve_bvp_collocation(prob, c.nodes, c.extrapolate);
            t.grid = grid;
            for (double x : grid) t.values.push_back(col.value_at(x));
            t.se.assign(grid.size(), 0.0);
            out.warnings.push_back("collocation residual " + num(col.residual));
            break;
        }
        }
        out.csv = xy_table(t.grid, t.values, t.se);
        break;
    }
    case Command::Check: {
        ConditionProbe probe;
        probe.endpoints = p.region;
        probe.radii = c.radii;
        probe.states = c.states;
        if (probe.states.empty()) {
            double lo = std::isfinite(c.a) ? c.a : (std::isfinite(c.b) ? c.b - 2.0 : -1.0);
            double hi = std::isfinite(c.b) ? c.b : lo + 2.0;
            for (int i = 1; i <= 5; ++i) probe.states.push_back(lo + (hi - lo) * i / 6.0);
        }
        auto rep = check_kernel_conditions(p.spec, probe);
        std::ostringstream s;
        s << "condition,passed,informational,constant,exponent,detail\n";
        for (auto& e : rep.entries)
            s << e.name << "," << (e.passed ? 1 : 0) << "," << (e.informational ? 1 : 0) << "," << num(e.constant)
              << "," << num(e.exponent) << "," << csv_field(e.detail) << "\n";
        if (!c.probe_radii.empty()) {
            for (Endpoint ep : {Endpoint::A, Endpoint::B}) {
                double end = ep == Endpoint::A ? c.a : c.b;
                if (!std::isfinite(end)) continue;
                auto r = regularity_probe(p.spec, p.region, ep, c.probe_radii, p.params);
                std::string detail = "mean exit times";
                for (auto& m : r.mean_exit_time) detail += " " + num(m.value) + "+-" + num(m.se);
                s << (ep == Endpoint::A ? "exit_time_probe_a" : "exit_time_probe_b") << "," << (r.regular ? 1 : 0)
                  << ",0," << num(r.mean_exit_time.back().value) << "," << num(r.exponent) << "," << csv_field(detail)
                  << "\n";
                if (r.censoring_warning) {
                    out.censored = true;
                    out.warnings.push_back("censored paths in the exit-time probe");
                }
            }
        }
        out.csv = s.str();
        break;
    }
    }
    return out;
}

std::string metadata(const RunConfig& c, const std::vector<std::string>& command_line, const Output& out, int status,
                     double seconds, int threads)
{
    YAML::Emitter e;
    e << YAML::BeginMap;
    e << YAML::Key << "tool" << YAML::Value << "fracmarkov";
    e << YAML::Key << "version" << YAML::Value << FRACMARKOV_VERSION;
    e << YAML::Key << "status" << YAML::Value << (status == kOk ? "ok" : status == kCensored ? "censored" : "error");
    e << YAML::Key << "exit_code" << YAML::Value << status;
    e << YAML::Key << "seed" << YAML::Value << c.seed;
    e << YAML::Key << "threads" << YAML::Value << threads;
    e << YAML::Key << "wall_time_s" << YAML::Value << num(seconds);
    e << YAML::Key << "command_line" << YAML::Value << YAML::Flow << command_line;
    e << YAML::Key << "csv" << YAML::Value << c.output;
    e << YAML::Key << "build" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "compiler" << YAML::Value << __VERSION__;
    e << YAML::Key << "boost" << YAML::Value << BOOST_LIB_VERSION;
    e << YAML::Key << "eigen" << YAML::Value
      << (std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
          std::to_string(EIGEN_MINOR_VERSION));
    e << YAML::EndMap;
    e << YAML::Key << "warnings" << YAML::Value << YAML::Flow << out.warnings;
    e << YAML::Key << "config" << YAML::Value << YAML::Load(to_yaml(c));
    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << text;
    if (!f) throw Error("cannot write " + path);
}

}  // namespace

std::string metadata_path(const std::string& output)
{
    auto slash = output.find_last_of('/');
    auto dot = output.find_last_of('.');
    std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash)) ? output.substr(0, dot)
                                                                                                 : output;
    return stem + ".meta.yaml";
}

RunResult run(const RunConfig& config, const std::vector<std::string>& command_line)
{
    auto t0 = std::chrono::steady_clock::now();
    RunResult res;
    Prepared p;
    try {
        p = prepare(config);
    } catch (const Error& e) {
        res.status = kConfigError;
        res.message = e.what();
        return res;
    }
    Output out;
    try {
        out = execute(config, p);
    } catch (const CensoringError& e) {
        res.status = kCensored;
        res.message = e.what();
        return res;
    } catch (const ConfigError& e) {
        res.status = kConfigError;
        res.message = e.what();
        return res;
    } catch (const Error& e) {
        res.status = kNumericalError;
        res.message = e.what();
        return res;
    }
    if (out.censored) {
        res.status = kCensored;
        res.message = out.warnings.front() + "; raise t_max";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.csv = out.csv;
    res.metadata = metadata(config, command_line, out, res.status, secs, resolve_threads(p.params));
    try {
        write_file(config.output, res.csv);
        write_file(metadata_path(config.output), res.metadata);
    } catch (const Error& e) {
        res.status = kNumericalError;
        res.message = e.what();
    }
    return res;
}

int main_entry(int argc, char** argv)
{
    CLI::App cli{"Fractional operators, jump processes and boundary value problems"};
    cli.set_version_flag("--version", FRACMARKOV_VERSION);
    std::string command, config_path, out_path;
    std::uint64_t seed = 0;
    long paths = 0;
    double truncation = 0;
    cli.add_option("command", command, "deriv | apply | simulate | solve | check")
        ->required()
        ->check(CLI::IsMember({"deriv", "apply", "simulate", "solve", "check"}));
    cli.add_option("--config", config_path, "YAML problem description (or a metadata record)")->required();
    auto* seed_opt = cli.add_option("--seed", seed, "random seed");
    auto* paths_opt = cli.add_option("--paths", paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
    auto* trunc_opt = cli.add_option("--truncation", truncation, "small-jump truncation h")->check(CLI::PositiveNumber);
    auto* out_opt = cli.add_option("--out", out_path, "CSV output path");
    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = cli.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    std::vector<std::string> line(argv, argv + argc);
    RunConfig c;
    try {
        c = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    const std::pair<const char*, Command> commands[] = {{"deriv", Command::Deriv},
                                                        {"apply", Command::Apply},
                                                        {"simulate", Command::Simulate},
                                                        {"solve", Command::Solve},
                                                        {"check", Command::Check}};
    for (auto& [name, cmd] : commands)
        if (command == name) c.command = cmd;
    if (*seed_opt) c.seed = seed;
    if (*paths_opt) c.paths = paths;
    if (*trunc_opt) c.truncation = truncation;
    if (*out_opt) c.output = out_path;

    auto res = run(c, line);
    if (res.status != kOk) std::cerr << (res.status == kCensored ? "censored: " : "error: ") << res.message << "\n";
    return res.status;
}

}  // namespace fracmarkov::app
