#include "strain.hpp"

#include <cmath>

namespace susphom {

bool is_strain(const Mat3& m, double tol) {
    if (std::abs(m.trace()) > tol) return false;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol) return false;
    return true;
}

void require_strain(const Mat3& m, const char* what) {
    if (!is_strain(m)) throw ConfigError(std::string(what) + ": matrix not symmetric trace-free");
}

Mat3 deviatoric_sym(const Mat3& m) {
    Mat3 s = m.sym();
    double t = s.trace() / 3.0;
    s(0, 0) -= t;
    s(1, 1) -= t;
    s(2, 2) -= t;
    return s;
}

namespace {
Mat3 diag(double a, double b, double c) {
    Mat3 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}
Mat3 offdiag(int i, int j) {
    Mat3 m;
    m(i, j) = m(j, i) = 1.0 / std::sqrt(2.0);
    return m;
}
}  // namespace

const std::array<Mat3, 5>& strain_basis() {
    static const std::array<Mat3, 5> basis = {
        diag(1, -1, 0) * (1.0 / std::sqrt(2.0)),
        diag(1, 1, -2) * (1.0 / std::sqrt(6.0)),
        offdiag(0, 1),
        offdiag(0, 2),
        offdiag(1, 2),
    };
    return basis;
}

std::array<double, 5> strain_coeffs(const Mat3& m) {
    std::array<double, 5> c{};
    const auto& basis = strain_basis();
    for (int a = 0; a < 5; ++a) c[a] = m.ddot(basis[a]);
    return c;
}

Mat3 strain_from_coeffs(const std::array<double, 5>& c) {
    Mat3 m;
    const auto& basis = strain_basis();
    for (int a = 0; a < 5; ++a) m += basis[a] * c[a];
    return m;
}

Mat3 default_strain() { return strain_basis()[0]; }

}  // namespace susphom
