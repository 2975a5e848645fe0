#include "single_sphere.hpp"

#include <cmath>

namespace susphom {

namespace {
constexpr int kD = 3;
constexpr double kC1 = 0.5 * (kD + 2);  // 5/2

void require_exterior(const Vec3& x) {
    if (x.norm() < 1.0 - 1e-12) throw ConfigError("single sphere field: point inside the sphere");
}
}  // namespace

Vec3 single_sphere_velocity(const Vec3& x, const Mat3& E) {
    require_exterior(x);
    const double r2 = x.norm2();
    const double r = std::sqrt(r2);
    const double rd2 = std::pow(r, -(kD + 2));  // r^{-5}
    const double rd4 = rd2 / r2;                // r^{-7}
    const double a = x.dot(E.apply(x));
    return x * (-kC1 * a * (rd2 - rd4)) - E.apply(x) * rd2;
}

double single_sphere_pressure(const Vec3& x, const Mat3& E) {
    require_exterior(x);
    const double r = x.norm();
    return -(kD + 2) * x.dot(E.apply(x)) * std::pow(r, -(kD + 2));
}

Mat3 single_sphere_grad_velocity(const Vec3& x, const Mat3& E) {
    require_exterior(x);
    const double r2 = x.norm2();
    const double r = std::sqrt(r2);
    const double r5 = std::pow(r, -(kD + 2));
    const double r7 = r5 / r2;
    const double r9 = r7 / r2;
    const double a = x.dot(E.apply(x));
    const Vec3 ex = E.apply(x);

    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = -kC1 * (2.0 * ex[j] * x[i] + a * (i == j ? 1.0 : 0.0)) * (r5 - r7);
            v += kC1 * a * x[i] * x[j] * ((kD + 2) * r7 - (kD + 4) * r9);
            v += -E(i, j) * r5 + (kD + 2) * ex[i] * x[j] * r7;
            g(i, j) = v;
        }
    return g;
}

Mat3 single_sphere_strain(const Vec3& x, const Mat3& E) {
    return single_sphere_grad_velocity(x, E).sym();
}

Vec3 single_sphere_traction(const Vec3& u, const Mat3& E) {
    if (std::abs(u.norm() - 1.0) > 1e-9)
        throw ConfigError("single_sphere_traction: direction must be a unit vector");
    // exterior limit of (2 D(psi + Ex) - Sigma Id) u collapses to (d+2) E u
    return E.apply(u) * static_cast<double>(kD + 2);
}

double stresslet_coefficient(double radius) {
    return (kD + 2) * (4.0 / 3.0) * kPi * radius * radius * radius;
}

double einstein_coefficient(int d, double mean_r_pow_d) {
    if (d != 2 && d != 3) throw ConfigError("einstein_coefficient: d must be 2 or 3");
    if (mean_r_pow_d <= 0 || mean_r_pow_d > 1.0 + 1e-12)
        throw ConfigError("einstein_coefficient: mean r^d must lie in (0,1]");
    const double ball = (d == 3) ? (4.0 / 3.0) * kPi : kPi;
    return 0.5 * (d + 2) * ball * mean_r_pow_d;
}

Vec3 sphere_velocity(const Vec3& x, const Vec3& center, double radius, const Mat3& A) {
    Vec3 w = (x - center) / radius;
    return single_sphere_velocity(w, A) * radius;
}

Mat3 sphere_grad_velocity(const Vec3& x, const Vec3& center, double radius, const Mat3& A) {
    Vec3 w = (x - center) / radius;
    return single_sphere_grad_velocity(w, A);
}

Mat3 sphere_strain(const Vec3& x, const Vec3& center, double radius, const Mat3& A) {
    return sphere_grad_velocity(x, center, radius, A).sym();
}

}  // namespace susphom
