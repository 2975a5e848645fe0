#pragma once

#include "strain.hpp"

namespace susphom {

// Free-space Stokes fundamental solution and its strain-propagation
// second-derivative contraction; d = 3 throughout.

// G0(z) = |z|^{-1}/(8 pi) (Id + zhat zhat)
Mat3 stokeslet(const Vec3& z);

// E : G(z) : Ep  with  M:G(z)M = M_jk M_lm d^2_km G0_jl(z); closed form
//   (3/(8 pi)) [ 5 (zh.E zh)(zh.Ep zh) - 2 (E zh).(Ep zh) ] / |z|^3
double strain_kernel_contract(const Vec3& z, const Mat3& E, const Mat3& Ep);

// Action on a stresslet: the symmetric trace-free strain induced at offset z
// by a point stresslet S at the origin (sym grad of grad G0 : S).
Mat3 strain_kernel_apply(const Vec3& z, const Mat3& S);

// Spherical pair integrand:
//   (d+2)^2 |B| [ (d+2)/2 (z.Ez)^2/|z|^{d+4} - |Ez|^2/|z|^{d+2} ]
double bg_integrand_sphere(const Vec3& z, const Mat3& E);

}  // namespace susphom
