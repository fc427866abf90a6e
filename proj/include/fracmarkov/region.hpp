#pragma once

#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace fracmarkov {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Interval {
    double a = -kInfinity;
    double b = kInfinity;
};

// Strictly increasing points.
struct CheckpointSet {
    std::vector<double> points;
};

// {x : x_1 < b} in dimension dim.
struct HalfSpace {
    double b;
    int dim;
};

// {x : a < x_1 < b} in dimension dim.
struct Band {
    double a;
    double b;
    int dim;
};

// Centered at the origin.
struct Ball {
    double radius;
    int dim;
};

using Region = std::variant<Interval, CheckpointSet, HalfSpace, Band, Ball>;

// Throws DomainError on malformed regions.
void validate(const Region& region);
int dimension(const Region& region);
// closed region
bool contains(const Region& region, std::span<const double> x);

// Nearest checkpoints strictly below and above x (infinite if none).
Interval enclosing_cell(const CheckpointSet& set, double x);

// Largest s >= 0 with x + s e in the closed region, e a unit vector;
// infinite if the ray never leaves. x must be in the closed region.
double ray_length(const Region& region, std::span<const double> x, std::span<const double> e);

// x + y if that point is in the closed region, else the boundary point on
// the segment from x to x + y. For intervals this is clamping.
std::vector<double> project_ray(const Region& region, std::span<const double> x, std::span<const double> y);
double project_ray(const Interval& region, double x, double y);

}  // namespace fracmarkov
