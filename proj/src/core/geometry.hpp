#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace susphom {

struct SeedRecord {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

// Point set on the torus [-L/2, L/2)^d with a hardcore radius guarantee.
// For d = 2 the z component is identically 0.
struct PointConfiguration {
    int d = 3;
    double L = 0;
    double r_hc = 0;
    SeedRecord seed;
    std::vector<Vec3> points;

    double volume() const;
};

struct SphereInclusion {
    Vec3 center;
    double radius = 1.0;
};

// Periodized suspension: inclusions restricted to the retention window
// Q_{L-2(1+delta)} with pairwise surface gaps > 2*delta (nearest image).
struct PeriodicConfiguration {
    int d = 3;
    double L = 0;
    double delta = 0;
    std::vector<SphereInclusion> inclusions;

    double volume_fraction() const;
};

// Capacity guard constant: at most kCapacityConstant * (L/delta)^d inclusions.
inline constexpr double kCapacityConstant = 1.0;

// torus helpers -------------------------------------------------------------

// wrap into [-L/2, L/2), componentwise, first d components
Vec3 torus_wrap(Vec3 v, double L, int d);
// nearest-image difference a-b
Vec3 torus_diff(const Vec3& a, const Vec3& b, double L, int d);
double torus_distance(const Vec3& a, const Vec3& b, double L, int d);

// invariant checks ----------------------------------------------------------

// Minimum pairwise torus distance >= 2*r_hc; throws CheckError on violation.
void validate_hardcore(const PointConfiguration& cfg);
void validate_periodic(const PeriodicConfiguration& cfg);

// operations ----------------------------------------------------------------

// {l x_n} on the torus of side l*L, hardcore radius scaled by l.
PointConfiguration dilate(const PointConfiguration& cfg, double ell);

// Keep each point independently with probability p, per-point stream (seed, index).
PointConfiguration bernoulli_delete(const PointConfiguration& cfg, double p,
                                    std::uint64_t seed);

// Retain points inside the window, attach radii, validate separation.
// radii.size() must be 1 (shared) or cfg.points.size() (per point).
PeriodicConfiguration periodize(const PointConfiguration& cfg,
                                const std::vector<double>& radii, double L, double delta);

// serialization ---------------------------------------------------------------

std::string to_json(const PointConfiguration& cfg);
PointConfiguration point_configuration_from_json(const std::string& text);
std::string to_json(const PeriodicConfiguration& cfg);
PeriodicConfiguration periodic_configuration_from_json(const std::string& text);

}  // namespace susphom
