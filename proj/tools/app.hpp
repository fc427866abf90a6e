#pragma once

#include "fracmarkov/fracops.hpp"
#include "fracmarkov/kernel.hpp"
#include "fracmarkov/montecarlo.hpp"
#include "fracmarkov/solver.hpp"

#include <string>
#include <vector>

namespace fracmarkov::app {

enum class Command { Deriv, Apply, Simulate, Solve, Check };

struct TermConfig {
    double weight = 1.0;
    double beta = 0.5;
    JumpSide side = JumpSide::Negative;
    bool operator==(const TermConfig&) const = default;
};

struct MajorantConfig {
    JumpSide side = JumpSide::Negative;
    double coeff = 1.0;
    double alpha = 0.5;
    bool operator==(const MajorantConfig&) const = default;
};

// Only the fields of the named kernel are read and written.
struct KernelConfig {
    // stable_one_sided stable_symmetric stable_like tempered_stable
    // mixed_caputo expression none
    std::string name = "stable_symmetric";
    double beta = 0.5;
    double scale = 1.0;
    JumpSide side = JumpSide::Negative;
    std::string amplitude = "1";  // stable_like, in x
    double amplitude_max = 1.0;
    double c = 1.0;  // tempered_stable
    double lambda_negative = 1.0;
    double lambda_positive = 1.0;
    std::vector<TermConfig> terms;  // mixed_caputo
    std::string density;            // expression, in x and y
    OrderClass order_class = OrderClass::BoundedVariation;
    std::vector<MajorantConfig> majorant;
    bool operator==(const KernelConfig&) const = default;
};

struct GridConfig {
    std::vector<double> points;  // explicit list; else count points from..to
    double from = 0.0, to = 0.0;  // default: the region
    int count = 11;
    bool operator==(const GridConfig&) const = default;
};

enum class DerivKind { RiemannLiouville, Caputo, Generator, Integral };
enum class OperatorChoice { Interrupted, Killed, Order2, Order2Regularized };

struct RunConfig {
    Command command = Command::Solve;
    std::uint64_t seed = 1;
    std::string output = "out.csv";

    double a = -1.0, b = 1.0;
    KernelConfig kernel;
    std::string drift = "0";
    Mollifier mollifier = Mollifier::Indicator;
    double f_a = 0.0, f_b = 0.0;
    std::string source = "0";
    double lambda = 0.0;
    GridConfig grid;

    // deriv, apply
    std::string function = "x";
    DerivKind kind = DerivKind::Caputo;
    double order = 0.5;
    Side side = Side::Right;
    double anchor = 0.0;
    bool anchor_set = false;  // default: a for Right, b for Left
    OperatorChoice op = OperatorChoice::Interrupted;

    // simulate
    BoundaryMode mode = BoundaryMode::Stopped;
    std::string quantity = "exit";  // exit | occupation
    int bins = 50;

    // solve
    SolveMethod method = SolveMethod::MonteCarlo;
    OperatorForm form = OperatorForm::Interrupted;
    int nodes = 128;
    bool extrapolate = true;

    // check
    std::vector<double> states;
    std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<double> probe_radii;  // exit-time regularity probes when non-empty

    // numerics
    long paths = 10000;
    double truncation = 1e-3;
    double t_max = 100.0;
    bool small_jump_drift = true;
    bool gaussian_correction = true;

    bool operator==(const RunConfig&) const = default;
};

// YAML text; a metadata record (with a "config" section) is accepted as well.
// Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Normalized YAML of the fields that matter for the command.
std::string to_yaml(const RunConfig& config);

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;
inline constexpr int kCensored = 4;

struct RunResult {
    int status = kOk;
    std::string csv;
    std::string metadata;
    std::string message;
};

// Runs the command, writes config.output and its metadata record.
RunResult run(const RunConfig& config, const std::vector<std::string>& command_line = {});

// Command-line entry point; returns the exit code.
int main_entry(int argc, char** argv);

// <out minus extension>.meta.yaml
std::string metadata_path(const std::string& output);

}  // namespace fracmarkov::app
