#pragma once

#include "strain.hpp"

namespace susphom {

// Closed-form exterior Stokes flow around a rigid unit sphere held in the
// linear ambient strain flow E x (velocity written relative to the ambient
// flow, so it decays at infinity and equals -Ex on the sphere). d = 3.
//
// All derivatives are hand-differentiated closed forms; finite-difference
// validation lives in the tests.

// perturbation velocity at |x| >= 1
Vec3 single_sphere_velocity(const Vec3& x, const Mat3& E);

// pressure at |x| >= 1
double single_sphere_pressure(const Vec3& x, const Mat3& E);

// full gradient (d psi_i / d x_j) at |x| >= 1
Mat3 single_sphere_grad_velocity(const Vec3& x, const Mat3& E);

// symmetrized gradient of the perturbation velocity
Mat3 single_sphere_strain(const Vec3& x, const Mat3& E);

// traction sigma(u).u of the full flow on the sphere surface, |u| = 1:
// exterior limit of 2 D(psi + Ex) - Sigma Id applied to the outward normal
Vec3 single_sphere_traction(const Vec3& u, const Mat3& E);

// stresslet response coefficient: integral of traction (x) position over the
// sphere of radius r equals alpha * E with alpha = (d+2) |B_r|
double stresslet_coefficient(double radius);

// scalar of the dilute one-particle viscosity coefficient: (d+2)/2 * |B_1| * E[r^d]
// (operator is this scalar times the identity on symmetric trace-free matrices)
double einstein_coefficient(int d, double mean_r_pow_d);

// scaled copies: rigid sphere of radius `radius` centered at `center` with
// ambient strain A; fields evaluated at lab point x
Vec3 sphere_velocity(const Vec3& x, const Vec3& center, double radius, const Mat3& A);
Mat3 sphere_grad_velocity(const Vec3& x, const Vec3& center, double radius, const Mat3& A);
Mat3 sphere_strain(const Vec3& x, const Vec3& center, double radius, const Mat3& A);

}  // namespace susphom
