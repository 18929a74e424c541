#pragma once

#include <cmath>

namespace dualcbf {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    constexpr double squared_norm() const { return x * x + y * y; }
    double norm() const { return std::sqrt(squared_norm()); }

    // Unit vector; returns (0,0) for norms below eps.
    Vec2 normalized(double eps = 1e-12) const {
        const double n = norm();
        return n > eps ? Vec2{x / n, y / n} : Vec2{};
    }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace dualcbf
