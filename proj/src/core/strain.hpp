#pragma once

#include <array>

#include "common.hpp"

namespace susphom {

// Symmetric trace-free 3x3 matrices; the space of driving strains and
// stresslets. Helpers keep the 5-dimensional coefficient view and the
// matrix view consistent.

using StrainMatrix = Mat3;

// tolerance of the type invariant (symmetry / trace)
inline constexpr double kStrainTol = 1e-12;

bool is_strain(const Mat3& m, double tol = kStrainTol);
void require_strain(const Mat3& m, const char* what);

// Remove trace and antisymmetric parts.
Mat3 deviatoric_sym(const Mat3& m);

// Frobenius-orthonormal basis of the symmetric trace-free subspace.
const std::array<Mat3, 5>& strain_basis();

std::array<double, 5> strain_coeffs(const Mat3& m);
Mat3 strain_from_coeffs(const std::array<double, 5>& c);

// diag(1,-1,0)/sqrt(2); the default driving direction.
Mat3 default_strain();

}  // namespace susphom
