#pragma once

#include <array>
#include <cmath>

namespace critbound {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline constexpr Vec3 e1{1.0, 0.0, 0.0};

/// Orthonormal frame (e, f, g) with e = axis / |axis|.
struct Frame {
    Vec3 e, f, g;

    explicit Frame(const Vec3& axis)
    {
        e = (1.0 / norm(axis)) * axis;
        const Vec3 trial = std::abs(e[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        f = trial - dot(trial, e) * e;
        f = (1.0 / norm(f)) * f;
        g = cross(e, f);
    }

    /// origin + a e + b (cos φ f + sin φ g)
    [[nodiscard]] Vec3 point(const Vec3& origin, double a, double b, double phi) const
    {
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        return {origin[0] + a * e[0] + b * (c * f[0] + s * g[0]),
                origin[1] + a * e[1] + b * (c * f[1] + s * g[1]),
                origin[2] + a * e[2] + b * (c * f[2] + s * g[2])};
    }
};

} // namespace critbound
