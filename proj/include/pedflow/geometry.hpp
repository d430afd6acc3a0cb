#pragma once

#include <algorithm>
#include <cmath>

namespace pedflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double k) noexcept { x *= k; y *= k; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double k) noexcept { return {a.x * k, a.y * k}; }
    friend constexpr Vec2 operator*(double k, Vec2 a) noexcept { return {a.x * k, a.y * k}; }
    friend constexpr Vec2 operator/(Vec2 a, double k) noexcept { return {a.x / k, a.y / k}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) noexcept = default;
};

inline double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }
constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }

/// Axis-aligned rectangle, `min` is the lower-left corner.
struct Rect {
    Vec2 min;
    Vec2 max;

    constexpr double width() const noexcept { return max.x - min.x; }
    constexpr double height() const noexcept { return max.y - min.y; }
    constexpr double area() const noexcept { return width() * height(); }
    constexpr bool valid() const noexcept { return min.x < max.x && min.y < max.y; }

    constexpr bool contains(Vec2 p) const noexcept {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
    constexpr bool contains(const Rect& r) const noexcept {
        return contains(r.min) && contains(r.max);
    }
    constexpr Rect inflated(double by) const noexcept {
        return {{min.x - by, min.y - by}, {max.x + by, max.y + by}};
    }
    Vec2 closest_point(Vec2 p) const noexcept {
        return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y)};
    }

    friend constexpr bool operator==(const Rect&, const Rect&) noexcept = default;
};

}  // namespace pedflow
