#include "fracmarkov/montecarlo.hpp"

#include "fracmarkov/detail/local_expansion.hpp"
#include "fracmarkov/detail/ray.hpp"
#include "fracmarkov/errors.hpp"
#include "fracmarkov/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <thread>

namespace fracmarkov {

void SimParams::validate() const
{
    if (!(h > 0.0)) throw DomainError("truncation h must be positive");
    if (paths < 1) throw DomainError("path count must be at least 1");
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    if (!(lambda >= 0.0)) throw DomainError("discount lambda must be nonnegative");
}

int resolve_threads(const SimParams& params)
{
    if (params.threads > 0) return params.threads;
    if (const char* env = std::getenv("FRACMARKOV_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Proposals from the majorant restricted to |y| > h.
class JumpSampler {
public:
    JumpSampler(const JumpKernel& k, double h) : kernel_(k), h_(h)
    {
        for (const auto& t : k.majorant.terms()) {
            double m = t.coeff * std::pow(h, -t.alpha) / t.alpha;
            rate_ += m;
            cum_.push_back(rate_);
        }
    }

    double rate() const { return rate_; }

    // Signed jump proposal.
    double propose(Rng& rng) const
    {
        const auto& terms = kernel_.majorant.terms();
        std::size_t i = 0;
        if (terms.size() > 1) {
            double u = rng.uniform() * rate_;
            while (i + 1 < terms.size() && u > cum_[i]) ++i;
        }
        const auto& t = terms[i];
        double r = h_ * std::exp(rng.exponential() / t.alpha);  // h U^(-1/alpha)
        return t.side == JumpSide::Negative ? -r : r;
    }

    bool accept(double x, double y, Rng& rng) const
    {
        if (kernel_.equals_majorant) return true;
        double v = kernel_.density(x, y);
        double m = kernel_.majorant.density(y);
        if (v > m * (1.0 + 1e-9))
            throw MajorantViolation("jump density exceeds its majorant at x=" + std::to_string(x) +
                                    ", y=" + std::to_string(y));
        return rng.uniform() * m < v;
    }

private:
    const JumpKernel& kernel_;
    double h_;
    double rate_ = 0.0;
    std::vector<double> cum_;
};

class PathBuilder {
public:
    PathBuilder(const Interval& r, BoundaryMode mode, const SimParams& p, PathObserver* obs)
        : r_(r), mode_(mode), params_(p), obs_(obs)
    {
    }

    PathRecord rec;
    bool contact = false;

    void piece(double t0, double t1, double x0, double x1)
    {
        if (contact || mode_ == BoundaryMode::Free || t1 <= t0) return;
        if (obs_) obs_->segment(t0, t1, x0, x1);
        if (params_.record_path) {
            if (rec.states.empty() || rec.states.back() != x0 || x0 != x1) {
                rec.states.push_back(x0);
                rec.holding.push_back(0.0);
            }
            rec.holding.back() += t1 - t0;
        }
    }

    void touch(double t, ExitSide side, double location)
    {
        if (contact) return;
        contact = true;
        rec.tau = t;
        rec.side = side;
        rec.exit_location = location;
    }

    const Interval& r_;
    BoundaryMode mode_;
    const SimParams& params_;
    PathObserver* obs_;
};

// Drift and variance standing in for the jumps with |y| <= h. Order <= 1:
//   b = int_{|y|<=h} y nu.
// Compensated:
//   b = int_{|y|<=h} y (1 - chi) nu - int_{|y|>h} y chi nu,  s2 = int_{|y|<=h} y^2 nu.
struct SmallJumps {
    double drift;
    double variance;
};

SmallJumps small_jumps(const GeneratorSpec& spec, double x, double h)
{
    const auto& k = spec.kernel;
    SmallJumps out{0.0, 0.0};
    for (JumpSide side : {JumpSide::Negative, JumpSide::Positive}) {
        if (k.majorant.empty(side)) continue;
        double s = side == JumpSide::Negative ? -1.0 : 1.0;
        double an = k.majorant.near_exponent(side), af = k.majorant.far_exponent(side);
        auto w = [&](double z) { return k.density(x, s * z); };
        auto z2 = [](double z) { return z * z; };
        out.variance += detail::near_zero_integral(z2, w, h, 2.0, an);
        if (k.order_class == OrderClass::BoundedVariation) {
            auto z1 = [](double z) { return z; };
            out.drift += s * detail::near_zero_integral(z1, w, h, 1.0, an);
            continue;
        }
        if (spec.mollifier == Mollifier::Cauchy) {
            auto z3 = [](double z) { return z * z * z / (1.0 + z * z); };
            out.drift += s * detail::near_zero_integral(z3, w, h, 3.0, an);
        }
        out.drift -= s * detail::outside_moment(w, h, af, spec.mollifier);
    }
    return out;
}

// Small-jump coefficients: a constant for state-independent kernels, a
// 257-point table on bounded intervals, direct evaluation otherwise.
class SmallJumpField {
public:
    SmallJumpField(const GeneratorSpec& spec, const Interval& r, double h, bool bounded)
        : spec_(spec), h_(h), a_(r.a), b_(r.b)
    {
        if (spec.kernel.majorant.terms().empty()) {
            values_.push_back({0.0, 0.0});
        } else if (spec.kernel.state_independent) {
            values_.push_back(small_jumps(spec, 0.0, h));
        } else if (bounded && std::isfinite(r.a) && std::isfinite(r.b)) {
            constexpr int n = 257;
            for (int i = 0; i < n; ++i) values_.push_back(small_jumps(spec, r.a + (r.b - r.a) * i / (n - 1), h));
        }
    }

    bool is_constant() const { return values_.size() == 1; }

    SmallJumps at(double x) const
    {
        if (values_.size() == 1) return values_[0];
        if (values_.empty()) return small_jumps(spec_, x, h_);
        double u = (x - a_) / (b_ - a_) * (values_.size() - 1);
        u = std::clamp(u, 0.0, static_cast<double>(values_.size() - 1));
        std::size_t i = std::min(static_cast<std::size_t>(u), values_.size() - 2);
        double f = u - i;
        return {values_[i].drift * (1 - f) + values_[i + 1].drift * f,
                values_[i].variance * (1 - f) + values_[i + 1].variance * f};
    }

private:
    const GeneratorSpec& spec_;
    double h_, a_, b_;
    std::vector<SmallJumps> values_;
};

void check_start(const Interval& r, BoundaryMode mode, double x0)
{
    if (!(r.a < r.b)) throw DomainError("interval needs a < b");
    if (!std::isfinite(x0)) throw DomainError("start must be finite");
    if (mode != BoundaryMode::Free && !(x0 >= r.a && x0 <= r.b)) throw DomainError("start outside the closed region");
}

// Order <= 1 scheme: compound Poisson jumps of nu_h between which the state
// follows the drift (plus the small-jump mean when enabled).
class BvSimulator {
public:
    BvSimulator(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode, const SimParams& params)
        : spec_(spec), r_(region), mode_(mode), params_(params), sampler_(spec.kernel, params.h),
          field_(spec, region, params.h, mode != BoundaryMode::Free)
    {
        params.validate();
        if (spec.kernel.order_class != OrderClass::BoundedVariation)
            throw ClassError("simulate_path needs a kernel of order at most one; use simulate_path_order2");
        if (!(region.a < region.b)) throw DomainError("interval needs a < b");
        extra_ = params.small_jump_drift && !field_.is_constant();
        constant_ = spec.drift.is_constant() && !extra_;
        velocity_ = spec.drift.constant + (params.small_jump_drift && field_.is_constant() ? field_.at(0.0).drift : 0.0);
        zero_ = constant_ && velocity_ == 0.0;
    }

    PathRecord run(double x0, std::uint64_t stream, PathObserver* observer) const
    {
        check_start(r_, mode_, x0);
        if (spec_.diffusion && spec_.diffusion(x0) != 0.0) throw DomainError("simulation requires zero diffusion");
        Rng rng(params_.seed, stream);
        PathBuilder pb(r_, mode_, params_, observer);
        const bool bounded = mode_ != BoundaryMode::Free;
        const bool stops = mode_ == BoundaryMode::Stopped || mode_ == BoundaryMode::Killed;
        double x = x0, t = 0.0;
        bool held = false;  // interrupted path sitting on the boundary
        if (bounded && (x <= r_.a || x >= r_.b)) {
            pb.touch(0.0, x <= r_.a ? ExitSide::Left : ExitSide::Right, x);
            pb.rec.final_state = x;
            if (stops) return pb.rec;
            held = true;
        }
        while (true) {
            double wait = sampler_.rate() > 0.0 ? rng.exponential() / sampler_.rate() : kInf;
            double t1 = std::min(t + wait, params_.t_max);
            double hit = kInf;
            // the interrupted process stays where its drift pushes it out
            double x1 = held && pushes_out(x) ? x : flow(x, t, t1, bounded, pb, hit);
            if (hit < kInf) {
                pb.touch(hit, x1 <= r_.a ? ExitSide::Left : ExitSide::Right, x1);
                if (stops) {
                    pb.rec.final_state = x1;
                    return pb.rec;
                }
                held = true;
            }
            x = x1;
            t = t1;
            if (t >= params_.t_max) break;
            double y = sampler_.propose(rng);
            if (!sampler_.accept(x, y, rng)) continue;
            ++pb.rec.jumps;
            double land = x + y;
            if (!bounded) {
                x = land;
                continue;
            }
            if (land <= r_.a || land >= r_.b) {
                ExitSide side = land <= r_.a ? ExitSide::Left : ExitSide::Right;
                if (mode_ == BoundaryMode::Killed) {
                    pb.touch(t, side, land);
                    pb.rec.final_state = land;
                    return pb.rec;
                }
                x = project_ray(r_, x, y);
                pb.touch(t, side, x);
                held = true;
                if (mode_ == BoundaryMode::Stopped) {
                    pb.rec.final_state = x;
                    return pb.rec;
                }
            } else {
                x = land;
                held = false;
            }
        }
        pb.rec.final_state = x;
        pb.rec.tau = pb.contact ? pb.rec.tau : params_.t_max;
        pb.rec.censored = bounded && !pb.contact;
        return pb.rec;
    }

private:
    double velocity(double x) const
    {
        if (constant_) return velocity_;
        double v = spec_.drift(x);
        if (params_.small_jump_drift) v += extra_ ? field_.at(x).drift : velocity_ - spec_.drift.constant;
        return v;
    }

    bool pushes_out(double x) const
    {
        double v = velocity(x);
        return (x <= r_.a && v <= 0.0) || (x >= r_.b && v >= 0.0);
    }

    double rk4(double x, double dt) const
    {
        double k1 = velocity(x), k2 = velocity(x + 0.5 * dt * k1), k3 = velocity(x + 0.5 * dt * k2),
               k4 = velocity(x + dt * k3);
        return x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }

    // Moves x along the flow over [t0, t1]; hit receives the time of
    // boundary contact, if any (bounded modes only).
    double flow(double x, double t0, double t1, bool bounded, PathBuilder& pb, double& hit) const
    {
        if (zero_) {
            pb.piece(t0, t1, x, x);
            return x;
        }
        if (constant_) {
            double x1 = x + velocity_ * (t1 - t0);
            if (bounded && (x1 <= r_.a || x1 >= r_.b)) {
                double bnd = x1 <= r_.a ? r_.a : r_.b;
                hit = std::min(t1, t0 + (bnd - x) / velocity_);
                pb.piece(t0, hit, x, bnd);
                return bnd;
            }
            pb.piece(t0, t1, x, x1);
            return x1;
        }
        double span = t1 - t0;
        int n = static_cast<int>(std::max(16.0, std::ceil(std::min(span, 1e6) / 1e-2)));
        double dt = span / n;
        double t = t0;
        for (int i = 0; i < n; ++i) {
            double x1 = rk4(x, dt);
            if (bounded && (x1 <= r_.a || x1 >= r_.b)) {
                double bnd = x1 <= r_.a ? r_.a : r_.b;
                // secant on the length of the last step
                double th0 = 0.0, g0 = x - bnd, th1 = 1.0, g1 = x1 - bnd;
                for (int it = 0; it < 8 && g1 != g0 && std::abs(g1) > 1e-15; ++it) {
                    double th = std::clamp(th1 - g1 * (th1 - th0) / (g1 - g0), 0.0, 1.0);
                    th0 = th1, g0 = g1, th1 = th;
                    g1 = rk4(x, th * dt) - bnd;
                }
                hit = t + th1 * dt;
                pb.piece(t, hit, x, bnd);
                return bnd;
            }
            pb.piece(t, t + dt, x, x1);
            x = x1;
            t += dt;
        }
        return x;
    }

    const GeneratorSpec& spec_;
    Interval r_;
    BoundaryMode mode_;
    const SimParams& params_;
    JumpSampler sampler_;
    SmallJumpField field_;
    bool extra_ = false, constant_ = true, zero_ = true;
    double velocity_ = 0.0;
};

}  // namespace

PathRecord simulate_path(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode, double x0,
                         const SimParams& params, std::uint64_t stream, PathObserver* observer)
{
    BvSimulator sim(spec, region, mode, params);
    return sim.run(x0, stream, observer);
}

namespace {

class Order2Simulator {
public:
    Order2Simulator(const GeneratorSpec& spec, const Interval& region, const SimParams& params)
        : spec_(spec), r_(region), params_(params), sampler_(spec.kernel, params.h), field_(spec, region, params.h, true)
    {
        params.validate();
        if (spec.kernel.order_class != OrderClass::Compensated)
            throw ClassError("simulate_path_order2 needs a compensated kernel");
        if (!(region.a < region.b) || std::isinf(region.a) || std::isinf(region.b))
            throw DomainError("simulate_path_order2 needs a bounded interval");
        // continuous pieces are advanced in steps no longer than this
        max_step_ = 1e-3 * (region.b - region.a);
    }

    PathRecord run(double x0, std::uint64_t stream, PathObserver* observer) const
    {
        check_start(r_, BoundaryMode::Stopped, x0);
        if (spec_.diffusion && spec_.diffusion(x0) != 0.0) throw DomainError("simulation requires zero diffusion");
        Rng rng(params_.seed, stream);
        PathBuilder pb(r_, BoundaryMode::Stopped, params_, observer);
        double x = x0, t = 0.0;
        auto stop = [&](double time, double bnd) {
            pb.touch(time, bnd == r_.a ? ExitSide::Left : ExitSide::Right, bnd);
            pb.rec.final_state = bnd;
            return pb.rec;
        };
        if (x <= r_.a || x >= r_.b) return stop(0.0, x <= r_.a ? r_.a : r_.b);
        // With constant coefficients and nobody watching the path, Gaussian
        // increments are summed lazily while the state is far from the
        // boundary: pend is the variance not yet drawn.
        const bool constant = field_.is_constant() && spec_.drift.is_constant();
        const bool lazy = constant && !observer && !params_.record_path;
        double pend = 0.0;
        auto draw = [&]() {
            x += std::sqrt(pend) * rng.normal();
            pend = 0.0;
        };
        auto outside = [&](double z) { return z <= r_.a || z >= r_.b; };
        auto margin = [&](double z) { return std::min(z - r_.a, r_.b - z); };
        while (true) {
            double wait = sampler_.rate() > 0.0 ? rng.exponential() / sampler_.rate() : kInf;
            double t1 = std::min(t + wait, params_.t_max);
            while (t < t1) {
                double dt = constant ? t1 - t : std::min(t1 - t, max_step_);
                SmallJumps sj = field_.at(x);
                double mu = sj.drift + spec_.drift(x);
                double s2 = params_.gaussian_correction ? sj.variance : 0.0;
                if (lazy && s2 > 0.0) {
                    double xd = x + mu * dt;
                    if (margin(xd) > kSafe * std::sqrt(pend + s2 * dt)) {
                        x = xd;
                        pend += s2 * dt;
                        t += dt;
                        continue;
                    }
                    if (pend > 0.0) {
                        draw();
                        if (outside(x)) return stop(t, x <= r_.a ? r_.a : r_.b);
                    }
                }
                double xn = x + mu * dt;
                if (s2 > 0.0) xn += std::sqrt(s2 * dt) * rng.normal();
                if (outside(xn)) {
                    double bnd = xn <= r_.a ? r_.a : r_.b;
                    pb.piece(t, t + dt, x, bnd);
                    return stop(t + dt, bnd);
                }
                if (s2 > 0.0) {
                    // Brownian bridge: crossing probability between the two end points
                    for (double bnd : {r_.a, r_.b}) {
                        double d0 = std::abs(x - bnd), d1 = std::abs(xn - bnd);
                        double e = 2.0 * d0 * d1 / (s2 * dt);
                        if (e < 40.0 && rng.uniform() < std::exp(-e)) {
                            pb.piece(t, t + dt, x, bnd);
                            return stop(t + dt, bnd);
                        }
                    }
                }
                pb.piece(t, t + dt, x, xn);
                x = xn;
                t += dt;
            }
            if (t >= params_.t_max) break;
            double y = sampler_.propose(rng);
            if (!sampler_.accept(x, y, rng)) continue;
            ++pb.rec.jumps;
            if (pend > 0.0 && margin(x + y) <= kSafe * std::sqrt(pend)) {
                draw();
                if (outside(x)) return stop(t, x <= r_.a ? r_.a : r_.b);
            }
            double land = x + y;
            if (outside(land)) return stop(t, land <= r_.a ? r_.a : r_.b);
            x = land;
        }
        if (pend > 0.0) draw();
        if (outside(x)) return stop(params_.t_max, x <= r_.a ? r_.a : r_.b);
        pb.rec.final_state = x;
        pb.rec.tau = params_.t_max;
        pb.rec.censored = true;
        return pb.rec;
    }

private:
    const GeneratorSpec& spec_;
    Interval r_;
    const SimParams& params_;
    JumpSampler sampler_;
    SmallJumpField field_;
    double max_step_;
    // deferred Gaussian sums stay this many deviations from the boundary
    static constexpr double kSafe = 10.0;
};

// Runs chunks of paths on worker threads; partial results are combined in
// chunk order, so the outcome does not depend on the thread count.
template <class Partial, class Fn>
std::vector<Partial> run_chunks(long paths, int threads, const Fn& fn)
{
    constexpr long chunk = 256;
    long nchunks = (paths + chunk - 1) / chunk;
    std::vector<Partial> parts(nchunks);
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        while (!failed) {
            long c = next++;
            if (c >= nchunks) return;
            try {
                fn(c * chunk, std::min(paths, (c + 1) * chunk), parts[c]);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    int n = static_cast<int>(std::min<long>(threads, nchunks));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return parts;
}

struct Moments {
    double sum = 0.0, sumsq = 0.0;
    void add(double v)
    {
        sum += v;
        sumsq += v * v;
    }
    void merge(const Moments& o)
    {
        sum += o.sum;
        sumsq += o.sumsq;
    }
    Estimate estimate(long n) const
    {
        double mean = sum / n;
        double var = n > 1 ? std::max(0.0, (sumsq - sum * mean) / (n - 1)) : 0.0;
        return {mean, std::sqrt(var / n)};
    }
};

struct ExitPartial {
    Moments left, right, censored, tau, dleft, dright;
    void add(const PathRecord& r, double lambda)
    {
        bool l = r.side == ExitSide::Left, rt = r.side == ExitSide::Right;
        double disc = lambda == 0.0 ? 1.0 : std::exp(-lambda * r.tau);
        left.add(l ? 1.0 : 0.0);
        right.add(rt ? 1.0 : 0.0);
        censored.add(r.censored ? 1.0 : 0.0);
        tau.add(r.tau);
        dleft.add(l ? disc : 0.0);
        dright.add(rt ? disc : 0.0);
    }
    void merge(const ExitPartial& o)
    {
        left.merge(o.left);
        right.merge(o.right);
        censored.merge(o.censored);
        tau.merge(o.tau);
        dleft.merge(o.dleft);
        dright.merge(o.dright);
    }
};

ExitStatistics finish(const ExitPartial& p, long n)
{
    ExitStatistics s;
    s.n = n;
    s.p_left = p.left.estimate(n);
    s.p_right = p.right.estimate(n);
    s.p_censored = p.censored.estimate(n);
    // counts partition n, so the three probabilities sum to one exactly
    s.p_censored.value = static_cast<double>(n - static_cast<long>(p.left.sum) - static_cast<long>(p.right.sum)) / n;
    s.mean_exit_time = p.tau.estimate(n);
    s.disc_left = p.dleft.estimate(n);
    s.disc_right = p.dright.estimate(n);
    s.censoring_warning = s.p_censored.value > 0.01;
    return s;
}

// Uniform entry point over both schemes.
class AnySimulator {
public:
    AnySimulator(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode, const SimParams& params)
    {
        params.validate();
        if (spec.kernel.order_class == OrderClass::Compensated) {
            if (mode != BoundaryMode::Stopped)
                throw ClassError("compensated kernels are simulated in stopped mode only");
            order2_.emplace(spec, region, params);
        } else {
            // statistics end at first contact, where interrupted and stopped
            // paths still coincide
            bv_.emplace(spec, region, mode == BoundaryMode::Interrupted ? BoundaryMode::Stopped : mode, params);
        }
    }

    PathRecord run(double x0, std::uint64_t stream, PathObserver* obs) const
    {
        return order2_ ? order2_->run(x0, stream, obs) : bv_->run(x0, stream, obs);
    }

private:
    std::optional<BvSimulator> bv_;
    std::optional<Order2Simulator> order2_;
};

}  // namespace

PathRecord simulate_path_order2(const GeneratorSpec& spec, const Interval& region, double x0,
                                const SimParams& params, std::uint64_t stream, PathObserver* observer)
{
    Order2Simulator sim(spec, region, params);
    return sim.run(x0, stream, observer);
}

ExitStatistics exit_statistics(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode, double x0,
                               const SimParams& params)
{
    if (mode == BoundaryMode::Free) throw DomainError("exit statistics need a bounded mode");
    AnySimulator sim(spec, region, mode, params);
    auto parts = run_chunks<ExitPartial>(params.paths, resolve_threads(params), [&](long lo, long hi, ExitPartial& p) {
        for (long i = lo; i < hi; ++i) p.add(sim.run(x0, static_cast<std::uint64_t>(i), nullptr), params.lambda);
    });
    ExitPartial total;
    for (const auto& p : parts) total.merge(p);
    return finish(total, params.paths);
}

namespace {

class BinObserver : public PathObserver {
public:
    BinObserver(const std::vector<double>& edges) : edges_(edges), mass_(edges.size() - 1, 0.0) {}

    void segment(double t0, double t1, double x0, double x1) override
    {
        double dt = t1 - t0;
        if (x0 == x1) {
            // a state sitting on an interior edge is shared by both bins
            std::size_t k = bin_of(x0);
            if (k > 0 && x0 == edges_[k]) {
                add(k - 1, 0.5 * dt);
                add(k, 0.5 * dt);
            } else {
                add(k, dt);
            }
            return;
        }
        // split the linear piece at the bin edges it crosses
        double lo = std::min(x0, x1), hi = std::max(x0, x1);
        std::size_t i = bin_of(lo), j = bin_of(hi);
        if (i == j) {
            add(i, dt);
            return;
        }
        double speed = dt / (hi - lo);
        double used = 0.0;
        for (std::size_t k = i; k <= j; ++k) {
            double a = std::max(lo, edges_[k]), b = std::min(hi, edges_[k + 1]);
            double part = k == j ? dt - used : (b - a) * speed;
            if (part > 0.0) {
                add(k, part);
                used += part;
            }
        }
    }

    void reset()
    {
        for (std::size_t k : touched_) mass_[k] = 0.0;
        touched_.clear();
    }

    const std::vector<double>& mass() const { return mass_; }
    const std::vector<std::size_t>& touched() const { return touched_; }

private:
    std::size_t bin_of(double x) const
    {
        auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
        long k = static_cast<long>(it - edges_.begin()) - 1;
        return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(mass_.size()) - 1));
    }
    void add(std::size_t k, double v)
    {
        if (mass_[k] == 0.0) touched_.push_back(k);
        mass_[k] += v;
    }

    const std::vector<double>& edges_;
    std::vector<double> mass_;
    std::vector<std::size_t> touched_;
};

}  // namespace

OccupationHistogram occupation_histogram(const GeneratorSpec& spec, const Interval& region, BoundaryMode mode,
                                         double x0, const SimParams& params, int bins)
{
    if (bins < 1) throw DomainError("occupation_histogram needs at least one bin");
    if (mode == BoundaryMode::Free) throw DomainError("occupation needs a bounded mode");
    if (std::isinf(region.a) || std::isinf(region.b)) throw DomainError("occupation needs a bounded interval");
    OccupationHistogram out;
    for (int i = 0; i <= bins; ++i) out.edges.push_back(region.a + (region.b - region.a) * i / bins);
    out.edges.back() = region.b;
    AnySimulator sim(spec, region, mode, params);
    struct Partial {
        ExitPartial exits;
        std::vector<Moments> bins;
    };
    auto parts = run_chunks<Partial>(params.paths, resolve_threads(params), [&](long lo, long hi, Partial& p) {
        p.bins.assign(bins, Moments{});
        BinObserver obs(out.edges);
        for (long i = lo; i < hi; ++i) {
            obs.reset();
            auto rec = sim.run(x0, static_cast<std::uint64_t>(i), &obs);
            p.exits.add(rec, params.lambda);
            for (std::size_t k : obs.touched()) {
                p.bins[k].sum += obs.mass()[k];
                p.bins[k].sumsq += obs.mass()[k] * obs.mass()[k];
            }
        }
    });
    ExitPartial total;
    std::vector<Moments> bm(bins);
    for (const auto& p : parts) {
        total.merge(p.exits);
        for (int k = 0; k < bins; ++k) bm[k].merge(p.bins[k]);
    }
    out.exits = finish(total, params.paths);
    for (int k = 0; k < bins; ++k) out.mass.push_back(bm[k].estimate(params.paths));
    return out;
}

namespace {

// E int e^{-lambda s} g(X_s) ds along linear pieces, 3-point Gauss in time.
class DiscountedObserver : public PathObserver {
public:
    DiscountedObserver(double lambda, const std::function<double(double)>& g) : lambda_(lambda), g_(g) {}

    void segment(double t0, double t1, double x0, double x1) override
    {
        double dt = t1 - t0;
        if (x0 == x1) {
            double w = lambda_ == 0.0 ? dt : std::exp(-lambda_ * t0) * -std::expm1(-lambda_ * dt) / lambda_;
            total += g_(x0) * w;
            return;
        }
        static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
        static constexpr double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            double u = 0.5 * (nodes[i] + 1.0);
            double t = t0 + u * dt;
            acc += weights[i] * g_(x0 + u * (x1 - x0)) * (lambda_ == 0.0 ? 1.0 : std::exp(-lambda_ * t));
        }
        total += 0.5 * dt * acc;
    }

    double total = 0.0;

private:
    double lambda_;
    const std::function<double(double)>& g_;
};

}  // namespace

Representation representation_estimate(const GeneratorSpec& spec, const Interval& region, double x0,
                                        const SimParams& params, double f_a, double f_b,
                                        const std::function<double(double)>& g)
{
    AnySimulator sim(spec, region, BoundaryMode::Stopped, params);
    struct Partial {
        ExitPartial exits;
        Moments value, occ;
    };
    auto parts = run_chunks<Partial>(params.paths, resolve_threads(params), [&](long lo, long hi, Partial& p) {
        for (long i = lo; i < hi; ++i) {
            DiscountedObserver obs(params.lambda, g);
            auto rec = sim.run(x0, static_cast<std::uint64_t>(i), g ? &obs : nullptr);
            p.exits.add(rec, params.lambda);
            double disc = params.lambda == 0.0 ? 1.0 : std::exp(-params.lambda * rec.tau);
            double v = -obs.total;
            if (rec.side == ExitSide::Left) v += f_a * disc;
            if (rec.side == ExitSide::Right) v += f_b * disc;
            p.value.add(v);
            p.occ.add(obs.total);
        }
    });
    Representation out;
    ExitPartial total;
    Moments value, occ;
    for (const auto& p : parts) {
        total.merge(p.exits);
        value.merge(p.value);
        occ.merge(p.occ);
    }
    out.exits = finish(total, params.paths);
    out.value = value.estimate(params.paths);
    out.occupation = occ.estimate(params.paths);
    return out;
}

}  // namespace fracmarkov
