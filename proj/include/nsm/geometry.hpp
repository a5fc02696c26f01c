#pragma once

#include <cmath>
#include <compare>

namespace nsm {

/// A point (or vector) in the plane.
struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  constexpr Point operator*(double s) const { return {x * s, y * s}; }
  constexpr Point operator/(double s) const { return {x / s, y / s}; }
  constexpr Point& operator+=(Point o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr auto operator<=>(const Point&) const = default;

  constexpr double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  /// Rotation by +90 degrees: (x, y) -> (-y, x).
  constexpr Point perp() const { return {-y, x}; }
  constexpr double dot(Point o) const { return x * o.x + y * o.y; }
};

constexpr Point operator*(double s, Point p) { return p * s; }

using Vec2 = Point;

}  // namespace nsm
