#pragma once

// Counter-based SplitMix64 streams. A replica's generator depends only on
// (seed, stream), so replicas can run in any order or on any thread.

#include <cmath>
#include <cstdint>

namespace fracmarkov {

inline std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : counter_(splitmix64(seed ^ splitmix64(stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL)))
    {
    }

    std::uint64_t next()
    {
        counter_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = counter_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on (0, 1)
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform()); }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = uniform(), v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        has_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

private:
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fracmarkov
