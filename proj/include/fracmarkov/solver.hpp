#pragma once

#include "fracmarkov/function.hpp"
#include "fracmarkov/generators.hpp"
#include "fracmarkov/kernel.hpp"
#include "fracmarkov/montecarlo.hpp"
#include "fracmarkov/region.hpp"

#include <string>
#include <vector>

namespace fracmarkov {

// Which boundary operator the equation uses: the interrupted one (boundary
// atoms carry f_a, f_b) or the killed one.
enum class OperatorForm { Interrupted, Killed };

// A f = lambda f + g on (a, b), f(a) = f_a, f(b) = f_b.
struct BvpProblem {
    GeneratorSpec spec;
    Interval region{-1.0, 1.0};
    double f_a = 0.0;
    double f_b = 0.0;
    ScalarFunction g = ScalarFunction::constant(0.0);
    double lambda = 0.0;
    OperatorForm form = OperatorForm::Interrupted;

    void validate() const;
};

enum class SolveMethod { MonteCarlo, Collocation, ClosedForm };

std::string to_string(SolveMethod m);

struct SolutionTable {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> se;  // zero for deterministic methods
    SolveMethod method = SolveMethod::ClosedForm;
    double residual = 0.0;  // collocation only: max-norm residual of the linear system
    long censored_points = 0;

    // piecewise-linear interpolation inside the grid
    double value_at(double x) const;
};

// f(x) = f_a E[e^{-lambda tau}; left] + f_b E[e^{-lambda tau}; right]
//        - E int_0^tau e^{-lambda s} g(X_s) ds.
// Throws CensoringError when a grid point censors more than 1% of paths.
SolutionTable solve_bvp_mc(const BvpProblem& problem, const SimParams& params, const std::vector<double>& grid);

// Symmetric beta-stable kernel on [-1, 1], lambda = 0, from the exit
// probability and the occupation density.
SolutionTable solve_bvp_closed_form(double beta, double f_a, double f_b, const ScalarFunction& g,
                                    const std::vector<double>& grid);

// Piecewise-linear collocation on n interior nodes graded towards both ends,
// by default Richardson-extrapolated against the mesh with halved cells.
// The table holds the nodes and both endpoints.
SolutionTable solve_bvp_collocation(const BvpProblem& problem, int n, bool extrapolate = true);

// f_a E_beta(-lambda (x - a)^beta).
double relaxation_solution(double beta, double lambda, double a, double f_a, double x);

// Rewrites the interrupted problem for f as a killed problem for f - v with
// zero boundary data; v must match f_a, f_b at the ends.
BvpProblem reduce_caputo_to_rl(const BvpProblem& problem, const ScalarFunction& v);

enum class Endpoint { A, B };

struct RegularityReport {
    Endpoint endpoint = Endpoint::A;
    std::vector<double> radii;
    std::vector<Estimate> mean_exit_time;
    double exponent = 0.0;  // fitted slope of log E tau against log radius
    bool regular = false;   // E tau decreases to zero along the radii
    bool censoring_warning = false;
    ConditionEntry lyapunov;  // the kernel condition int min(|y|, eps) nu > C eps^r
};

RegularityReport regularity_probe(const GeneratorSpec& spec, const Interval& region, Endpoint endpoint,
                                  const std::vector<double>& radii, const SimParams& params);

}  // namespace fracmarkov
