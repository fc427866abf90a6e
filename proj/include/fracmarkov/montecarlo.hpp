#pragma once

#include "fracmarkov/kernel.hpp"
#include "fracmarkov/region.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fracmarkov {

enum class BoundaryMode { Interrupted, Stopped, Killed, Free };
enum class ExitSide { None, Left, Right };

struct SimParams {
    double h = 1e-3;        // jumps with |y| <= h are dropped (or compensated)
    long paths = 10000;
    double t_max = 100.0;
    std::uint64_t seed = 1;
    double lambda = 0.0;    // discount rate for the exit transforms
    int threads = 0;        // 0: FRACMARKOV_THREADS or hardware concurrency
    bool record_path = false;
    // order <= 1: move with the mean of the dropped jumps between epochs
    bool small_jump_drift = true;
    // order-2 scheme: add a Gaussian matching the dropped second moment
    bool gaussian_correction = true;

    void validate() const;
};

struct PathRecord {
    double tau = 0.0;          // first boundary contact; t_max if censored
    bool censored = false;
    ExitSide side = ExitSide::None;
    double exit_location = 0.0;
    double final_state = 0.0;  // state at t_max (Interrupted, Free) or at tau
    long jumps = 0;
    // pre-exit states and their holding times, when recorded
    std::vector<double> states;
    std::vector<double> holding;
};

// Receives the continuous pieces of a path before the first exit. Motion
// within a piece is linear from x0 to x1.
class PathObserver {
public:
    virtual ~PathObserver() = default;
    virtual void segment(double t0, double t1, double x0, double x1) = 0;
};

// Kernels of order at most one, via the truncated kernel nu_h.
PathRecord simulate_path(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode, double x0,
                         const SimParams& params, std::uint64_t stream, PathObserver* observer = nullptr);

// Compensated kernels: jumps above h, small jumps replaced by drift and an
// optional Gaussian. Stopped at the boundary.
PathRecord simulate_path_order2(const GeneratorSpec& spec, const Interval& region, double x0,
                                const SimParams& params, std::uint64_t stream, PathObserver* observer = nullptr);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct ExitStatistics {
    long n = 0;
    Estimate p_left, p_right, p_censored;
    Estimate mean_exit_time;  // of min(tau, t_max)
    Estimate disc_left, disc_right;  // E[exp(-lambda tau); side]
    bool censoring_warning = false;  // p_censored > 0.01
};

ExitStatistics exit_statistics(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode, double x0,
                               const SimParams& params);

struct OccupationHistogram {
    std::vector<double> edges;
    std::vector<Estimate> mass;
    ExitStatistics exits;
};

OccupationHistogram occupation_histogram(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode,
                                         double x0, const SimParams& params, int bins);

// Mean and standard error of
//   f_a E[e^{-lambda tau}; left] + f_b E[e^{-lambda tau}; right] - E int_0^tau e^{-lambda s} g(X_s) ds
// per path, together with the exit statistics from the same samples.
struct Representation {
    Estimate value;
    Estimate occupation;  // E int_0^tau e^{-lambda s} g(X_s) ds
    ExitStatistics exits;
};

Representation representation_estimate(const GeneratorSpec& spec, const Interval& region, double x0,
                                        const SimParams& params, double f_a, double f_b,
                                        const std::function<double(double)>& g);

// Worker count from params and the environment.
int resolve_threads(const SimParams& params);

}  // namespace fracmarkov
