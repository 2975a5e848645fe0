#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ewald.hpp"
#include "geometry.hpp"
#include "strain.hpp"

namespace susphom {

// Truncation order of the interaction model: every particle carries one
// symmetric trace-free stresslet; the coupled system is
//   S_n = alpha_n A_n,
//   A_n = E + sum_{m != n} U_L(x_n - x_m) S_m + U_L^reg(0) S_n,
// with alpha_n = (d+2)|B_{r_n}| the single-sphere response. Per-pair
// truncation error of the model is O((r/rho)^{d+2}).
struct DipoleSolution {
    std::vector<SphereInclusion> spheres;
    double L = 0;  // 0 for free-space solutions
    Mat3 E;
    std::vector<Mat3> stresslets;
    std::vector<Mat3> ambient;
    int iterations = 0;
    double residual = 0;
    std::string kernel_metadata;
};

struct ViscosityReading {
    double value = 1.0;   // E : B_L E for the driving direction
    double excess = 0.0;  // value - 1
    int iterations = 0;
    double residual = 0;
};

enum class SolveMethod { kAuto, kFixedPoint, kDirect };

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 200;
    SolveMethod method = SolveMethod::kAuto;
    double relaxation = 1.0;
    // declared validity envelope; refuse instead of emitting unreliable numbers
    bool enforce_envelope = false;
    double max_volume_fraction = 0.05;
};

// Dense direct solve is offered up to this many scalar unknowns (5 per particle).
inline constexpr int kDirectSolveUnknownCap = 3000;

DipoleSolution solve_periodic_dipole(const PeriodicConfiguration& config, const Mat3& E,
                                     const StrainKernelEvaluator& kernel,
                                     const SolveOptions& opts = {});

ViscosityReading effective_viscosity_reading(const DipoleSolution& solution);

// Runs the solver over the orthonormal strain basis and polarizes:
// out[a][b] = E_a : B_L E_b.
std::array<std::array<double, 5>, 5> assemble_viscosity_tensor(
    const PeriodicConfiguration& config, const StrainKernelEvaluator& kernel,
    const SolveOptions& opts = {});

// Dipole-field disturbance strain at a point. Periodic solutions need their
// kernel; free-space solutions (L = 0) use the exact single-sphere fields.
Mat3 disturbance_strain(const DipoleSolution& solution, const StrainKernelEvaluator* kernel,
                        const Vec3& at);

std::string to_json(const DipoleSolution& solution, std::uint64_t config_digest);

}  // namespace susphom
