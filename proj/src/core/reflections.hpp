#pragma once

#include <vector>

#include "dipole_solver.hpp"

namespace susphom {

// Free-space method of reflections at stresslet order, built from the exact
// single-sphere exterior fields: each sphere responds to the local strain of
// the others' solutions, evaluated at its center. Higher-fidelity oracle for
// sign conventions and far-field kernels; intended for small sphere counts.
DipoleSolution solve_freespace_reflections(const std::vector<SphereInclusion>& spheres,
                                           const Mat3& E, int order);

// Pair energy coupling extracted from the reflection oracle:
//   [S_1(pair) + S_2(pair) - S_1(alone) - S_2(alone)] : E
// for two unit spheres separated by z. Far field ~ 2 alpha^2 E : G(z) : E.
double two_sphere_cluster_term(const Vec3& z, const Mat3& E, int order = 30);

}  // namespace susphom
