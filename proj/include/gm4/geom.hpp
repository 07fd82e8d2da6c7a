// Small fixed-size vector/matrix helpers used throughout the library.
#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace gm4 {

struct Vec2 {
    double x = 0, y = 0;
    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        const double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
};

struct Vec3 {
    double x = 0, y = 0, z = 0;
    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        return n > 0 ? Vec3{x / n, y / n, z / n} : Vec3{0, 0, 0};
    }
};

using Vec4 = std::array<double, 4>;

inline double dot4(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm4(const Vec4& a) { return std::sqrt(dot4(a, a)); }

inline double det4(const std::array<Vec4, 4>& m) {
    double a[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = m[i][j];
    double det = 1.0;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < 4; ++j) std::swap(a[piv][j], a[c][j]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < 4; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int j = c; j < 4; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

// Column-major 2x2 matrix [[a,b],[c,d]] acting on column vectors.
struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0;  // row 1: a b, row 2: c d
    double det() const { return a * d - b * c; }
    Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    static Mat2 rotation(double ang) {
        const double cs = std::cos(ang), sn = std::sin(ang);
        return {cs, -sn, sn, cs};
    }
    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

// Solve [[m00,m01],[m10,m11]] x = rhs.
inline Vec2 solve2(double m00, double m01, double m10, double m11, const Vec2& rhs) {
    const double det = m00 * m11 - m01 * m10;
    return {(rhs.x * m11 - rhs.y * m01) / det, (m00 * rhs.y - m10 * rhs.x) / det};
}

// Singular values of a tall 4x2 matrix (descending).
inline std::array<double, 2> singular_values_4x2(const std::array<std::array<double, 2>, 4>& m) {
    double g00 = 0, g01 = 0, g11 = 0;
    for (int r = 0; r < 4; ++r) {
        g00 += m[r][0] * m[r][0];
        g01 += m[r][0] * m[r][1];
        g11 += m[r][1] * m[r][1];
    }
    const double tr = g00 + g11;
    const double disc = std::sqrt(std::max(0.0, (g00 - g11) * (g00 - g11) + 4 * g01 * g01));
    const double l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    return {std::sqrt(std::max(0.0, l1)), std::sqrt(std::max(0.0, l2))};
}

// Deterministic pairwise summation.
inline double pairwise_sum(std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    size_t n = xs.size();
    while (n > 1) {
        const size_t half = (n + 1) / 2;
        for (size_t i = 0; i < n / 2; ++i) xs[i] = xs[2 * i] + xs[2 * i + 1];
        if (n & 1) xs[n / 2] = xs[n - 1];
        n = half;
    }
    return xs[0];
}

}  // namespace gm4
