#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace susphom {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Error taxonomy mirrors the CLI exit codes: config 2, numerical 3, assertion 4.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
class CheckError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Dense 3x3, row-major. Used for strain matrices and kernel actions.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 zero() { return Mat3{}; }
    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] * s;
        return r;
    }
    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) a[i] += o.a[i];
        return *this;
    }

    Vec3 apply(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }

    double trace() const { return a[0] + a[4] + a[8]; }

    // Frobenius inner product.
    double ddot(const Mat3& o) const {
        double s = 0;
        for (int i = 0; i < 9; ++i) s += a[i] * o.a[i];
        return s;
    }
    double norm() const { return std::sqrt(ddot(*this)); }

    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
    Mat3 sym() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
        return r;
    }
};

inline Mat3 operator*(double s, const Mat3& m) { return m * s; }

inline Mat3 outer(const Vec3& u, const Vec3& v) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
    return m;
}

// Compensated accumulator; keeps parallel/serial reductions bit-stable enough
// for the 1e-14 agreement contracts.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace susphom
