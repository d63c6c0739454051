#pragma once

#include <array>
#include <cmath>

namespace scfv {

/// Small fixed-size vector for spatial quantities. 2D fields keep the
/// third component at zero.
using Vec3 = std::array<double, 3>;

inline constexpr Vec3 zero_vec() { return {0.0, 0.0, 0.0}; }

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm2_sq(const Vec3& a) { return dot(a, a); }

inline double norm2(const Vec3& a) { return std::sqrt(norm2_sq(a)); }

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double s, const Vec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

inline Vec3 axis_unit(int axis) {
    Vec3 n = zero_vec();
    n[axis] = 1.0;
    return n;
}

} // namespace scfv
