#pragma once
#include <array>
#include <cmath>
#include <stdexcept>

namespace triad {

inline constexpr double TWO_PI = 6.283185307179586476925286766559;

// normalize an angle to [0, 2*pi)
inline double mod2pi(double a) {
    double r = std::fmod(a, TWO_PI);
    if (r < 0) r += TWO_PI;
    return r;
}

// signed angular difference a-b wrapped to (-pi, pi]
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, TWO_PI);
    if (d <= -0.5 * TWO_PI) d += TWO_PI;
    if (d > 0.5 * TWO_PI) d -= TWO_PI;
    return d;
}

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n == 0) throw std::domain_error("normalized: zero vector");
    return v / n;
}

struct Mat3 {
    // row-major
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int i, int j) const { return a[3 * i + j]; }
    double& operator()(int i, int j) { return a[3 * i + j]; }

    Vec3 operator*(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }
    Mat3 operator*(const Mat3& m) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * m(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
};

// rotation about axis 1 (x) or axis 3 (z) by angle alpha
inline Mat3 rotation(int axis, double alpha) {
    double c = std::cos(alpha), s = std::sin(alpha);
    Mat3 m;
    if (axis == 1) {
        m.a = {1, 0, 0,
               0, c, -s,
               0, s, c};
    } else if (axis == 3) {
        m.a = {c, -s, 0,
               s, c, 0,
               0, 0, 1};
    } else {
        throw std::invalid_argument("rotation: axis must be 1 or 3");
    }
    return m;
}

// oriented angle from u to v, measured counterclockwise around w; in [0, 2*pi)
inline double angle_about(const Vec3& w, const Vec3& u, const Vec3& v) {
    double nw = norm(w);
    if (nw == 0) throw std::domain_error("angle_about: zero axis");
    double s = dot(w, cross(u, v)) / nw;
    double c = dot(u, v);
    if (s == 0 && c == 0) throw std::domain_error("angle_about: undefined angle (zero vector)");
    return mod2pi(std::atan2(s, c));
}

}  // namespace triad
