#pragma once

// Small planar geometry kit: vectors, 2x2 linear maps, segment distance,
// and a tolerance-aware point-in-triangle test.

#include <algorithm>
#include <cmath>

namespace cardylab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Row-major 2x2 linear map.
struct LinearMap {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  constexpr Vec2 operator()(Vec2 v) const {
    return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
  }

  static constexpr LinearMap diagonal(double sx, double sy) { return {sx, 0.0, 0.0, sy}; }

  static LinearMap rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c, -s, s, c};
  }
};

// f after g.
constexpr LinearMap compose(const LinearMap& f, const LinearMap& g) {
  return {f.a11 * g.a11 + f.a12 * g.a21, f.a11 * g.a12 + f.a12 * g.a22,
          f.a21 * g.a11 + f.a22 * g.a21, f.a21 * g.a12 + f.a22 * g.a22};
}

inline double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

// Closed triangle membership with a metric tolerance: points within `tol`
// of an edge (on either side) count as inside. Degenerate triangles contain
// nothing.
inline bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double tol) {
  const double orient = cross(b - a, c - a);
  if (orient == 0.0) return false;
  const double sign = orient > 0.0 ? 1.0 : -1.0;
  const auto inside_of = [&](Vec2 u, Vec2 v) {
    return sign * cross(v - u, p - u) / norm(v - u) >= -tol;
  };
  return inside_of(a, b) && inside_of(b, c) && inside_of(c, a);
}

}  // namespace cardylab
