#include "app.hpp"

#include "fracmarkov/errors.hpp"
#include "fracmarkov/expression.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace fracmarkov::app {

namespace {

template <class E>
using Names = std::vector<std::pair<E, const char*>>;

const Names<Command> kCommands{{Command::Deriv, "deriv"},
                               {Command::Apply, "apply"},
                               {Command::Simulate, "simulate"},
                               {Command::Solve, "solve"},
                               {Command::Check, "check"}};
const Names<JumpSide> kSides{{JumpSide::Negative, "negative"}, {JumpSide::Positive, "positive"}};
const Names<Mollifier> kMollifiers{{Mollifier::Indicator, "indicator"}, {Mollifier::Cauchy, "cauchy"}, {Mollifier::Unit, "unit"}};
const Names<OrderClass> kOrders{{OrderClass::BoundedVariation, "bv"}, {OrderClass::Compensated, "compensated"}};
const Names<DerivKind> kKinds{{DerivKind::RiemannLiouville, "rl"},
                              {DerivKind::Caputo, "caputo"},
                              {DerivKind::Generator, "generator"},
                              {DerivKind::Integral, "integral"}};
const Names<Side> kDerivSides{{Side::Right, "right"}, {Side::Left, "left"}};
const Names<OperatorChoice> kOperators{{OperatorChoice::Interrupted, "interrupted"},
                                       {OperatorChoice::Killed, "killed"},
                                       {OperatorChoice::Order2, "order2"},
                                       {OperatorChoice::Order2Regularized, "order2_regularized"}};
const Names<BoundaryMode> kModes{{BoundaryMode::Interrupted, "interrupted"},
                                 {BoundaryMode::Stopped, "stopped"},
                                 {BoundaryMode::Killed, "killed"},
                                 {BoundaryMode::Free, "free"}};
const Names<SolveMethod> kMethods{{SolveMethod::MonteCarlo, "mc"},
                                  {SolveMethod::Collocation, "collocation"},
                                  {SolveMethod::ClosedForm, "closed-form"}};
const Names<OperatorForm> kForms{{OperatorForm::Interrupted, "interrupted"}, {OperatorForm::Killed, "killed"}};

const std::set<std::string> kKernelNames{"stable_one_sided", "stable_symmetric", "stable_like", "tempered_stable",
                                         "mixed_caputo",     "expression",       "none"};

template <class E>
const char* name_of(const Names<E>& names, E e)
{
    for (auto& [v, n] : names)
        if (v == e) return n;
    throw ConfigError("unnamed enum value");
}

std::string fmt(double v)
{
    if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

bool present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

// Reads a map, rejecting keys it was not asked about.
class Reader {
public:
    Reader(YAML::Node node, std::string where) : node_(std::move(node)), where_(std::move(where))
    {
        if (present(node_) && !node_.IsMap()) fail("expected a map");
    }

    bool has(const std::string& key) const { return present(node_) && present(std::as_const(node_)[key]); }

    // null when absent
    YAML::Node child(const std::string& key)
    {
        seen_.insert(key);
        if (!present(node_)) return YAML::Node();
        YAML::Node n = std::as_const(node_)[key];
        return n.IsDefined() ? n : YAML::Node();
    }

    template <class T>
    T get(const std::string& key, T fallback)
    {
        auto n = child(key);
        if (!present(n)) return fallback;
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail("bad value for '" + key + "'");
        }
    }

    double number(const std::string& key, double fallback) { return get<double>(key, fallback); }

    template <class E>
    E choice(const std::string& key, const Names<E>& names, E fallback)
    {
        auto n = child(key);
        if (!present(n)) return fallback;
        auto s = scalar(n, key);
        for (auto& [v, name] : names)
            if (s == name) return v;
        std::string opts;
        for (auto& [v, name] : names) opts += std::string(opts.empty() ? "" : ", ") + name;
        fail("'" + key + "' must be one of " + opts);
    }

    std::string expression(const std::string& key, const std::string& fallback, std::vector<std::string> vars)
    {
        auto n = child(key);
        std::string text = present(n) ? scalar(n, key) : fallback;
        return Expression::parse(text, std::move(vars)).str();
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback)
    {
        auto n = child(key);
        if (!present(n)) return fallback;
        if (!n.IsSequence()) fail("'" + key + "' must be a list of numbers");
        std::vector<double> out;
        try {
            for (auto e : n) out.push_back(e.as<double>());
        } catch (const YAML::Exception&) {
            fail("'" + key + "' must be a list of numbers");
        }
        return out;
    }

    void finish() const
    {
        if (!present(node_)) return;
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            auto key = it->first.as<std::string>();
            if (!seen_.count(key)) fail("unknown key '" + key + "'");
        }
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError(where_ + ": " + what);
    }

private:
    std::string scalar(const YAML::Node& n, const std::string& key) const
    {
        if (!n.IsScalar()) fail("'" + key + "' must be a scalar");
        return n.Scalar();
    }

    YAML::Node node_;
    std::string where_;
    std::set<std::string> seen_;
};

KernelConfig read_kernel(YAML::Node node)
{
    Reader r(node, "kernel");
    KernelConfig k;
    k.name = r.get<std::string>("name", k.name);
    if (!kKernelNames.count(k.name)) r.fail("unknown kernel '" + k.name + "'");
    if (k.name == "stable_one_sided" || k.name == "stable_symmetric" || k.name == "stable_like" ||
        k.name == "tempered_stable")
        k.beta = r.number("beta", k.beta);
    if (k.name == "stable_one_sided" || k.name == "stable_symmetric") k.scale = r.number("scale", k.scale);
    if (k.name == "stable_one_sided") k.side = r.choice("side", kSides, k.side);
    if (k.name == "stable_like") {
        k.amplitude = r.expression("amplitude", k.amplitude, {"x"});
        k.amplitude_max = r.number("amplitude_max", k.amplitude_max);
    }
    if (k.name == "tempered_stable") {
        k.c = r.number("c", k.c);
        k.lambda_negative = r.number("lambda_negative", k.lambda_negative);
        k.lambda_positive = r.number("lambda_positive", k.lambda_positive);
    }
    if (k.name == "mixed_caputo") {
        auto terms = r.child("terms");
        if (!present(terms) || !terms.IsSequence() || terms.size() == 0) r.fail("mixed_caputo needs a list of terms");
        for (auto t : terms) {
            Reader tr(t, "kernel.terms");
            TermConfig c;
            c.weight = tr.number("weight", c.weight);
            c.beta = tr.number("beta", c.beta);
            c.side = tr.choice("side", kSides, c.side);
            tr.finish();
            k.terms.push_back(c);
        }
    }
    if (k.name == "expression") {
        if (!r.has("density")) r.fail("expression kernels need a density in x and y");
        k.density = r.expression("density", "", {"x", "y"});
        k.order_class = r.choice("order", kOrders, k.order_class);
        auto maj = r.child("majorant");
        if (!present(maj) || !maj.IsSequence() || maj.size() == 0)
            r.fail("expression kernels need a majorant: list of {side, coeff, alpha}");
        for (auto t : maj) {
            Reader tr(t, "kernel.majorant");
            MajorantConfig m;
            m.side = tr.choice("side", kSides, m.side);
            m.coeff = tr.number("coeff", m.coeff);
            m.alpha = tr.number("alpha", m.alpha);
            tr.finish();
            k.majorant.push_back(m);
        }
    }
    r.finish();
    return k;
}

RunConfig read_config(const YAML::Node& root)
{
    if (!present(root) || !root.IsMap()) throw ConfigError("config must be a map");
    YAML::Node top = root;
    // a metadata record carries the config it was produced from
    if (present(root["config"]) && present(root["tool"])) top = root["config"];

    Reader r(top, "config");
    RunConfig c;
    c.command = r.choice("command", kCommands, c.command);
    c.seed = r.get<std::uint64_t>("seed", c.seed);
    c.output = r.get<std::string>("output", c.output);

    Reader region(r.child("region"), "region");
    c.a = region.number("a", c.a);
    c.b = region.number("b", c.b);
    region.finish();
    if (!(c.a < c.b)) r.fail("region needs a < b");

    c.kernel = read_kernel(r.child("kernel"));
    c.drift = r.expression("drift", c.drift, {"x"});
    c.mollifier = r.choice("mollifier", kMollifiers, c.mollifier);

    Reader bd(r.child("boundary"), "boundary");
    c.f_a = bd.number("f_a", c.f_a);
    c.f_b = bd.number("f_b", c.f_b);
    bd.finish();
    c.source = r.expression("source", c.source, {"x"});
    c.lambda = r.number("lambda", c.lambda);

    auto g = r.child("grid");
    c.grid.from = c.a;
    c.grid.to = c.b;
    if (present(g) && g.IsSequence()) {
        try {
            for (auto e : g) c.grid.points.push_back(e.as<double>());
        } catch (const YAML::Exception&) {
            r.fail("grid must be a list of numbers or {from, to, count}");
        }
        if (c.grid.points.empty()) r.fail("grid list is empty");
        c.grid.from = c.grid.to = 0.0;
        c.grid.count = 0;
    } else {
        Reader gr(g, "grid");
        c.grid.from = gr.number("from", c.grid.from);
        c.grid.to = gr.number("to", c.grid.to);
        c.grid.count = gr.get<int>("count", c.grid.count);
        gr.finish();
        if (c.grid.count < 1) gr.fail("count must be positive");
    }

    c.function = r.expression("function", c.function, {"x"});
    Reader dv(r.child("derivative"), "derivative");
    c.kind = dv.choice("kind", kKinds, c.kind);
    c.order = dv.number("order", c.order);
    c.side = dv.choice("side", kDerivSides, c.side);
    if (dv.has("anchor")) {
        c.anchor = dv.number("anchor", 0.0);
        c.anchor_set = true;
    }
    dv.finish();
    c.op = r.choice("operator", kOperators, c.op);

    Reader sim(r.child("simulate"), "simulate");
    c.mode = sim.choice("mode", kModes, c.mode);
    c.quantity = sim.get<std::string>("quantity", c.quantity);
    if (c.quantity != "exit" && c.quantity != "occupation") sim.fail("quantity must be exit or occupation");
    c.bins = sim.get<int>("bins", c.bins);
    if (c.bins < 1) sim.fail("bins must be positive");
    sim.finish();

    Reader sv(r.child("solve"), "solve");
    c.method = sv.choice("method", kMethods, c.method);
    c.form = sv.choice("form", kForms, c.form);
    c.nodes = sv.get<int>("nodes", c.nodes);
    c.extrapolate = sv.get<bool>("extrapolate", c.extrapolate);
    sv.finish();

    Reader ck(r.child("check"), "check");
    c.states = ck.numbers("states", c.states);
    c.radii = ck.numbers("radii", c.radii);
    c.probe_radii = ck.numbers("probe_radii", c.probe_radii);
    ck.finish();

    Reader nm(r.child("numerics"), "numerics");
    c.paths = nm.get<long>("paths", c.paths);
    c.truncation = nm.number("truncation", c.truncation);
    c.t_max = nm.number("t_max", c.t_max);
    c.small_jump_drift = nm.get<bool>("small_jump_drift", c.small_jump_drift);
    c.gaussian_correction = nm.get<bool>("gaussian_correction", c.gaussian_correction);
    nm.finish();
    if (c.paths < 1) nm.fail("paths must be positive");
    if (!(c.truncation > 0.0)) nm.fail("truncation must be positive");
    if (!(c.t_max > 0.0)) nm.fail("t_max must be positive");

    r.finish();
    return c;
}

void emit_numbers(YAML::Emitter& e, const std::vector<double>& v)
{
    e << YAML::Flow << YAML::BeginSeq;
    for (double x : v) e << fmt(x);
    e << YAML::EndSeq;
}

}  // namespace

RunConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& ex) {
        throw ConfigError(std::string("config is not valid YAML: ") + ex.what());
    }
    return read_config(root);
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_yaml(const RunConfig& c)
{
    YAML::Emitter e;
    e << YAML::BeginMap;
    e << YAML::Key << "command" << YAML::Value << name_of(kCommands, c.command);
    e << YAML::Key << "seed" << YAML::Value << c.seed;
    e << YAML::Key << "output" << YAML::Value << c.output;
    e << YAML::Key << "region" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "a" << YAML::Value
      << fmt(c.a) << YAML::Key << "b" << YAML::Value << fmt(c.b) << YAML::EndMap;

    const auto& k = c.kernel;
    e << YAML::Key << "kernel" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << k.name;
    if (k.name == "stable_one_sided" || k.name == "stable_symmetric" || k.name == "stable_like" ||
        k.name == "tempered_stable")
        e << YAML::Key << "beta" << YAML::Value << fmt(k.beta);
    if (k.name == "stable_one_sided" || k.name == "stable_symmetric")
        e << YAML::Key << "scale" << YAML::Value << fmt(k.scale);
    if (k.name == "stable_one_sided") e << YAML::Key << "side" << YAML::Value << name_of(kSides, k.side);
    if (k.name == "stable_like") {
        e << YAML::Key << "amplitude" << YAML::Value << k.amplitude;
        e << YAML::Key << "amplitude_max" << YAML::Value << fmt(k.amplitude_max);
    }
    if (k.name == "tempered_stable") {
        e << YAML::Key << "c" << YAML::Value << fmt(k.c);
        e << YAML::Key << "lambda_negative" << YAML::Value << fmt(k.lambda_negative);
        e << YAML::Key << "lambda_positive" << YAML::Value << fmt(k.lambda_positive);
    }
    if (k.name == "mixed_caputo") {
        e << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
        for (auto& t : k.terms)
            e << YAML::Flow << YAML::BeginMap << YAML::Key << "weight" << YAML::Value << fmt(t.weight) << YAML::Key
              << "beta" << YAML::Value << fmt(t.beta) << YAML::Key << "side" << YAML::Value << name_of(kSides, t.side)
              << YAML::EndMap;
        e << YAML::EndSeq;
    }
    if (k.name == "expression") {
        e << YAML::Key << "density" << YAML::Value << k.density;
        e << YAML::Key << "order" << YAML::Value << name_of(kOrders, k.order_class);
        e << YAML::Key << "majorant" << YAML::Value << YAML::BeginSeq;
        for (auto& m : k.majorant)
            e << YAML::Flow << YAML::BeginMap << YAML::Key << "side" << YAML::Value << name_of(kSides, m.side)
              << YAML::Key << "coeff" << YAML::Value << fmt(m.coeff) << YAML::Key << "alpha" << YAML::Value
              << fmt(m.alpha) << YAML::EndMap;
        e << YAML::EndSeq;
    }
    e << YAML::EndMap;

    e << YAML::Key << "drift" << YAML::Value << c.drift;
    e << YAML::Key << "mollifier" << YAML::Value << name_of(kMollifiers, c.mollifier);

    e << YAML::Key << "grid" << YAML::Value;
    if (!c.grid.points.empty()) {
        emit_numbers(e, c.grid.points);
    } else {
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "from" << YAML::Value << fmt(c.grid.from) << YAML::Key
          << "to" << YAML::Value << fmt(c.grid.to) << YAML::Key << "count" << YAML::Value << c.grid.count
          << YAML::EndMap;
    }

    switch (c.command) {
    case Command::Deriv:
        e << YAML::Key << "function" << YAML::Value << c.function;
        e << YAML::Key << "derivative" << YAML::Value << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "kind" << YAML::Value << name_of(kKinds, c.kind);
        e << YAML::Key << "order" << YAML::Value << fmt(c.order);
        e << YAML::Key << "side" << YAML::Value << name_of(kDerivSides, c.side);
        if (c.anchor_set) e << YAML::Key << "anchor" << YAML::Value << fmt(c.anchor);
        e << YAML::EndMap;
        break;
    case Command::Apply:
        e << YAML::Key << "function" << YAML::Value << c.function;
        e << YAML::Key << "operator" << YAML::Value << name_of(kOperators, c.op);
        break;
    case Command::Simulate:
        e << YAML::Key << "lambda" << YAML::Value << fmt(c.lambda);
        e << YAML::Key << "simulate" << YAML::Value << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "mode" << YAML::Value << name_of(kModes, c.mode);
        e << YAML::Key << "quantity" << YAML::Value << c.quantity;
        e << YAML::Key << "bins" << YAML::Value << c.bins;
        e << YAML::EndMap;
        break;
    case Command::Solve:
        e << YAML::Key << "boundary" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "f_a"
          << YAML::Value << fmt(c.f_a) << YAML::Key << "f_b" << YAML::Value << fmt(c.f_b) << YAML::EndMap;
        e << YAML::Key << "source" << YAML::Value << c.source;
        e << YAML::Key << "lambda" << YAML::Value << fmt(c.lambda);
        e << YAML::Key << "solve" << YAML::Value << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "method" << YAML::Value << name_of(kMethods, c.method);
        e << YAML::Key << "form" << YAML::Value << name_of(kForms, c.form);
        e << YAML::Key << "nodes" << YAML::Value << c.nodes;
        e << YAML::Key << "extrapolate" << YAML::Value << c.extrapolate;
        e << YAML::EndMap;
        break;
    case Command::Check:
        e << YAML::Key << "check" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "states" << YAML::Value;
        emit_numbers(e, c.states);
        e << YAML::Key << "radii" << YAML::Value;
        emit_numbers(e, c.radii);
        e << YAML::Key << "probe_radii" << YAML::Value;
        emit_numbers(e, c.probe_radii);
        e << YAML::EndMap;
        break;
    }

    e << YAML::Key << "numerics" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "paths" << YAML::Value << c.paths;
    e << YAML::Key << "truncation" << YAML::Value << fmt(c.truncation);
    e << YAML::Key << "t_max" << YAML::Value << fmt(c.t_max);
    e << YAML::Key << "small_jump_drift" << YAML::Value << c.small_jump_drift;
    e << YAML::Key << "gaussian_correction" << YAML::Value << c.gaussian_correction;
    e << YAML::EndMap;
    e << YAML::EndMap;
    if (!e.good()) throw ConfigError("cannot serialize config: " + e.GetLastError());
    return std::string(e.c_str()) + "\n";
}

}  // namespace fracmarkov::app
