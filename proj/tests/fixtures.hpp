#pragma once

#include <vector>

#include "kwatch/geometry.hpp"

namespace kwatch::testing {

inline Polygon unit_square() {
  return validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
}

inline Polygon l_shape() {
  return validate_polygon({{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}}, true);
}

inline Polygon u_shape() {
  return validate_polygon(
      {{0, 0}, {9, 0}, {9, 5}, {7, 5}, {7, 2}, {2, 2}, {2, 5}, {0, 5}}, true);
}

// Bottom bar with three teeth.
inline Polygon comb_shape() {
  return validate_polygon({{0, 0}, {9, 0}, {9, 5}, {8, 5}, {8, 2}, {5, 2}, {5, 5}, {4, 5},
                           {4, 2}, {1, 2}, {1, 5}, {0, 5}},
                          true);
}

// Corridor of width two winding inwards.
inline Polygon spiral_shape() {
  return validate_polygon({{0, 0}, {10, 0}, {10, 10}, {2, 10}, {2, 4}, {6, 4}, {6, 6}, {4, 6},
                           {4, 8}, {8, 8}, {8, 2}, {0, 2}},
                          true);
}

// Room with `count` hooked alcoves on the top wall. Each hook's horizontal
// arm is hidden from the room, so every hook contributes one essential cut.
inline Polygon hooks_shape(int count) {
  const double w = 4.0 * count + 1.0;
  std::vector<Point> v{{0, 0}, {w, 0}, {w, 4}};
  for (int i = count - 1; i >= 0; --i) {
    const double a = 1.0 + 4.0 * i;
    for (Point p : {Point{a + 1, 4}, Point{a + 1, 6}, Point{a + 3, 6}, Point{a + 3, 7},
                    Point{a, 7}, Point{a, 4}})
      v.push_back(p);
  }
  v.push_back({0, 4});
  return validate_polygon(std::move(v), true);
}

struct Case {
  Polygon poly;
  Point s;
};

inline std::vector<Case> cases() {
  return {{unit_square(), {0, 0}},   {l_shape(), {4, 0}},       {l_shape(), {0, 0}},
          {l_shape(), {3, 2}},       {u_shape(), {4, 0}},       {u_shape(), {0, 5}},
          {u_shape(), {7, 3}},       {comb_shape(), {6, 0}},    {comb_shape(), {0, 0}},
          {comb_shape(), {5, 3}},    {spiral_shape(), {0, 1}},  {spiral_shape(), {5, 10}},
          {hooks_shape(3), {6, 0}},  {hooks_shape(5), {10, 0}}};
}

// Independent closed-polygon membership: crossing number plus an explicit
// distance-to-edge check.
inline bool oracle_contains(const Polygon& poly, Point p, double tol = 1e-9) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i];
    const Point b = v[(i + 1) % n];
    const Point d = b - a;
    double t = dot(p - a, d) / dot(d, d);
    t = t < 0 ? 0 : (t > 1 ? 1 : t);
    if (l2(p, a + d * t) <= tol) return true;
    if ((a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * d.x / d.y) inside = !inside;
  }
  return inside;
}

// Dense-sampling segment visibility oracle.
inline bool oracle_sees(const Polygon& poly, Point a, Point b, int steps = 4000) {
  for (int i = 0; i <= steps; ++i) {
    if (!oracle_contains(poly, a + (b - a) * (static_cast<double>(i) / steps))) return false;
  }
  return true;
}

}  // namespace kwatch::testing
