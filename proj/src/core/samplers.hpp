#pragma once

#include <cstdint>
#include <string>

#include "geometry.hpp"

namespace susphom {

// Saturation guard for the dependent-thinning construction: requests with
// lambda * (2 r_hc)^d above this bound retain under ~3% of proposals and are
// refused as over-dense.
inline constexpr double kHardcoreSaturation = 10.0;

// Intensity guard for the two-scale example process: lambda * 6^d must stay
// below this bound so the parent process is genuinely dilute.
inline constexpr double kExample26Bound = 0.5;

// Homogeneous Poisson on the torus (no hardcore); auxiliary reference process.
PointConfiguration sample_poisson(double lambda, double L, int d, std::uint64_t seed);

// Dependent-thinning hardcore sample: propose Poisson(lambda L^d) points with
// iid uniform marks; a point survives iff every conflicting point (torus
// distance < 2 r_hc) of smaller mark is itself rejected. Resolved by
// processing in mark order against the survivor set, which is the finite-torus
// fixed point of that recursion.
PointConfiguration sample_hardcore_poisson(double lambda, double r_hc, double L, int d,
                                           std::uint64_t seed);

// Two-scale process: hardcore parents (radius 6) plus, per parent, a
// Bernoulli(lambda^beta) satellite placed uniformly in the annulus B_4 \ B_3.
PointConfiguration sample_example26(double lambda, double beta, double L, int d,
                                    std::uint64_t seed);

// Serializable sampler description used by estimators and the CLI.
struct SamplerSpec {
    enum class Kind { kPoisson, kHardcorePoisson, kExample26 };
    Kind kind = Kind::kHardcorePoisson;
    double lambda = 0;
    double r_hc = 0;
    double beta = 0;
    double L = 0;
    int d = 3;

    PointConfiguration sample(std::uint64_t seed) const;
    std::string describe() const;
};

}  // namespace susphom
