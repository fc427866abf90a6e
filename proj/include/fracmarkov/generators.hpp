#pragma once

#include "fracmarkov/function.hpp"
#include "fracmarkov/kernel.hpp"
#include "fracmarkov/region.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fracmarkov {

// One-dimensional operators. x is in the closed interval; on the boundary
// the jumps towards it contribute nothing.

// gamma f' + int [f(clamp(x + y)) - f(x)] nu(x, y) dy
double apply_interrupted(const GeneratorSpec& spec, const Interval& region, const ScalarFunction& f, double x);

// Interrupted operator on the cell of B containing x.
double apply_checkpoint(const GeneratorSpec& spec, const CheckpointSet& set, const ScalarFunction& f, double x);

// Jumps leaving [a, b] kill the process. Works for both order classes.
double apply_killed(const GeneratorSpec& spec, const Interval& region, const ScalarFunction& f, double x);

// Interval operator for compensated kernels. With regularized = false this
// diverges at an endpoint where f' does not vanish.
double apply_interrupted_order2(const GeneratorSpec& spec, const Interval& region, const ScalarFunction& f,
                                double x, bool regularized);

// Mass of nu(x, .) on jumps leaving [a, b] through each end.
struct EscapeMass {
    double left;
    double right;
};
EscapeMass escape_mass(const JumpKernel& kernel, const Interval& region, double x);

// Multidimensional kernels nu(x; y), x, y in R^dim.
struct KernelND {
    std::function<double(std::span<const double> x, std::span<const double> y)> density;
    int dim = 2;
    // nu(x; r e) r^(dim-1) behaves like r^(-1-alpha) at 0 and at infinity
    double alpha_near = 0.5;
    double alpha_far = 0.5;
    std::string name = "custom";
};

// a(x) / |y|^(dim + beta), beta in (0,1).
KernelND stable_like_nd(double beta, int dim, std::function<double(std::span<const double>)> amplitude);

using FieldFunction = std::function<double(std::span<const double>)>;
using VectorField = std::function<std::vector<double>(std::span<const double>)>;

struct GeneratorSpecND {
    VectorField drift;  // optional
    KernelND kernel;
};

// (gamma, grad f) + int [f(project_ray(x, y)) - f(x)] nu(x; y) dy over
// half-spaces, bands and balls. Angular quadrature is deterministic for
// dim <= 3; higher dimensions use a fixed set of quasi-random directions.
double apply_interrupted(const GeneratorSpecND& spec, const Region& region, const FieldFunction& f,
                         std::span<const double> x);

// Condition report.

struct ConditionEntry {
    std::string name;
    bool passed = false;
    // informational entries never count as failures
    bool informational = false;
    std::vector<double> values;
    double constant = 0.0;
    double exponent = 0.0;
    std::string detail;
};

struct ConditionReport {
    std::vector<ConditionEntry> entries;
    bool all_passed() const;
    const ConditionEntry* find(const std::string& name) const;
};

struct ConditionProbe {
    std::vector<double> states;
    // decreasing positive radii (epsilon grid)
    std::vector<double> radii;
    // endpoints for the regularity and drift entries; infinite to skip
    Interval endpoints;
};

ConditionReport check_kernel_conditions(const GeneratorSpec& spec, const ConditionProbe& probe);

struct ConditionProbeND {
    std::vector<std::vector<double>> states;
    std::vector<double> radii;
};

// Uniform bound and the Omega <= C omega condition for half-space and band
// operators (jumps in the first coordinate, dim 2 or 3).
ConditionReport check_kernel_conditions(const KernelND& kernel, const ConditionProbeND& probe);

}  // namespace fracmarkov
