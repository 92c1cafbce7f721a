#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace odms {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double k, Point2 p) noexcept { return {k * p.x, k * p.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) noexcept { return std::hypot(p.x, p.y); }

struct Box {
  Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  double width() const noexcept { return hi.x - lo.x; }
  double height() const noexcept { return hi.y - lo.y; }
  Point2 center() const noexcept { return 0.5 * (lo + hi); }
};

inline Box bounding_box(std::span<const Point2> pts) noexcept {
  Box b;
  for (auto p : pts) {
    b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
    b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
  }
  return b;
}

/// Shoelace area; positive for counter-clockwise vertex order (y up).  The
/// polygon is closed implicitly, a repeated last vertex is harmless.
inline double signed_area(std::span<const Point2> poly) noexcept {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i)
    twice += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * twice;
}

inline double polygon_area(std::span<const Point2> poly) noexcept {
  return std::abs(signed_area(poly));
}

struct CubicBezier {
  Point2 p0, c1, c2, p3;

  Point2 at(double t) const noexcept {
    const double u = 1.0 - t;
    return (u * u * u) * p0 + (3.0 * u * u * t) * c1 + (3.0 * u * t * t) * c2 + (t * t * t) * p3;
  }
};

/// Appends the curve sampled at `segments` uniform parameter steps, without
/// the start point (the caller owns it) and including the end point.
inline void flatten_into(const CubicBezier& curve, int segments, std::vector<Point2>& out) {
  for (int k = 1; k <= segments; ++k) {
    out.push_back(k == segments ? curve.p3 : curve.at(static_cast<double>(k) / segments));
  }
}

}  // namespace odms
