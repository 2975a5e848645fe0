#include "stokeslet.hpp"

#include <cmath>

namespace susphom {

namespace {
constexpr int kD = 3;
constexpr double kC2 = kD / (8.0 * kPi);  // d / (2 |dB|)

void require_nonzero(const Vec3& z) {
    if (z.norm2() == 0.0) throw ConfigError("kernel evaluated at z = 0");
}
}  // namespace

Mat3 stokeslet(const Vec3& z) {
    require_nonzero(z);
    const double r = z.norm();
    const Vec3 zh = z / r;
    Mat3 m = Mat3::identity() + outer(zh, zh);
    return m * (1.0 / (8.0 * kPi * r));
}

double strain_kernel_contract(const Vec3& z, const Mat3& E, const Mat3& Ep) {
    require_nonzero(z);
    const double r = z.norm();
    const Vec3 zh = z / r;
    const Vec3 ez = E.apply(zh), epz = Ep.apply(zh);
    const double a = zh.dot(ez), ap = zh.dot(epz);
    return kC2 * ((kD + 2) * a * ap - 2.0 * ez.dot(epz)) / (r * r * r);
}

Mat3 strain_kernel_apply(const Vec3& z, const Mat3& S) {
    require_nonzero(z);
    const double r = z.norm();
    const Vec3 zh = z / r;
    const Vec3 sz = S.apply(zh);
    const double a = zh.dot(sz);
    Mat3 m = outer(sz, zh) + outer(zh, sz) + Mat3::identity() * a - outer(zh, zh) * (5.0 * a);
    return m * (-kC2 / (r * r * r));
}

double bg_integrand_sphere(const Vec3& z, const Mat3& E) {
    require_nonzero(z);
    const double r = z.norm();
    const Vec3 zh = z / r;
    const Vec3 ez = E.apply(zh);
    const double a = zh.dot(ez);
    const double ball = (4.0 / 3.0) * kPi;
    return (kD + 2) * (kD + 2) * ball * (0.5 * (kD + 2) * a * a - ez.dot(ez)) / (r * r * r);
}

}  // namespace susphom
