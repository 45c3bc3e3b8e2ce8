/**
 * @file geometry.hpp
 * @brief Planar vector type and angle helpers shared by every module.
 *
 * World coordinates are meters in a right-handed frame: bearings are measured
 * counter-clockwise from +x in degrees, so bearing 90 points along +y.
 */

#pragma once

#include <cmath>
#include <numbers>

namespace wisar {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
constexpr double squared_norm(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
constexpr double squared_distance(const Vec2& a, const Vec2& b) { return squared_norm(a - b); }

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Unit vector pointing along `bearing_deg`.
inline Vec2 unit_from_bearing(double bearing_deg) {
    const double r = deg_to_rad(bearing_deg);
    return {std::cos(r), std::sin(r)};
}

/// Bearing of `v` in degrees, in (-180, 180].
inline double bearing_of(const Vec2& v) { return rad_to_deg(std::atan2(v.y, v.x)); }

/// Wraps an angle into [0, 360).
inline double wrap_360(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    return w >= 360.0 ? 0.0 : w;
}

/// Wraps an angle into (-180, 180].
inline double wrap_180(double deg) {
    double w = wrap_360(deg);
    return w > 180.0 ? w - 360.0 : w;
}

/// Returns `v` scaled to unit length, or the zero vector when `v` is zero.
inline Vec2 normalized(const Vec2& v) {
    const double n = norm(v);
    return n > 0.0 ? Vec2{v.x / n, v.y / n} : Vec2{};
}

/// Closest point on segment [a, b] to `p`, with its parameter in [0, 1].
struct SegmentProjection {
    Vec2 point;
    double t = 0.0;
};

inline SegmentProjection project_onto_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = squared_norm(ab);
    if (len2 <= 0.0) return {a, 0.0};
    double t = dot(p - a, ab) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return {a + ab * t, t};
}

}  // namespace wisar
