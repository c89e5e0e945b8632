#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kwatch {

enum class ErrorCode {
  kSelfIntersecting,
  kNotClosed,
  kNotOrthogonal,
  kNonIntegerCoordinates,
  kDegenerateCollinearRun,
  kPointOutsidePolygon,
  kSourceOutsidePolygon,
  kRouteOutsidePolygon,
  kRegionOutsidePolygon,
  kStartNotOnBoundary,
  kInstanceTooLarge,
  kQuotaExceedsArea,
  kBudgetInfeasible,
  kParseError,
  kSchemaError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Geometric tolerance for floating-point predicates, relative to the
/// polygon's bounding-box scale.
inline constexpr double kGeomTolerance = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double l2(Point a, Point b) { return norm(b - a); }
inline double l1(Point a, Point b) {
  return std::abs(b.x - a.x) + std::abs(b.y - a.y);
}
/// Twice the signed area of triangle abc; positive when counterclockwise.
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

struct Segment {
  Point a;
  Point b;
};

enum class Metric { kL1, kL2 };

inline double distance(Point a, Point b, Metric m) {
  return m == Metric::kL1 ? l1(a, b) : l2(a, b);
}

/// Simple polygon with counterclockwise vertex order.
class Polygon {
 public:
  Polygon() = default;

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const Point& vertex(std::size_t i) const {
    return vertices_[i % vertices_.size()];
  }
  Segment edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }

  bool orthogonal() const { return orthogonal_; }
  bool integral() const { return integral_; }
  /// Vertex i has an interior angle above 180 degrees.
  bool is_reflex(std::size_t i) const { return reflex_[i]; }
  const std::vector<std::size_t>& reflex_indices() const { return reflex_ids_; }

  /// Absolute tolerance used by predicates on this polygon.
  double tolerance() const { return tol_; }
  double diameter() const { return diam_; }
  double perimeter() const;

 private:
  friend Polygon validate_polygon(std::vector<Point>, bool);
  std::vector<Point> vertices_;
  std::vector<bool> reflex_;
  std::vector<std::size_t> reflex_ids_;
  bool orthogonal_ = false;
  bool integral_ = false;
  double tol_ = kGeomTolerance;
  double diam_ = 0.0;
};

/// Normalizes orientation to counterclockwise and checks simplicity. A
/// trailing copy of the first vertex is accepted and dropped.
Polygon validate_polygon(std::vector<Point> vertices, bool require_orthogonal);

/// Signed shoelace area of a ring (positive when counterclockwise).
double signed_area(std::span<const Point> ring);
double polygon_area(const Polygon& poly);

/// Closest distance between point p and segment s.
double point_segment_distance(Point p, const Segment& s);
/// Closed-segment intersection test; touching counts.
bool segments_intersect(const Segment& s, const Segment& t, double tol = 0.0);
/// Exact test for segments with integer-valued coordinates.
bool segments_intersect_exact(const Segment& s, const Segment& t);

enum class Location { kOutside, kBoundary, kInside };

Location locate(const Polygon& poly, Point p);
inline bool contains(const Polygon& poly, Point p) {
  return locate(poly, p) != Location::kOutside;
}
/// Crossing-number test on a bare ring; boundary points are unspecified.
bool ring_contains(std::span<const Point> ring, Point p);

/// True iff the closed segment ab avoids the exterior of P. Grazing the
/// boundary counts as visible.
bool point_sees_point(const Polygon& poly, Point a, Point b);

struct GeodesicPath {
  std::vector<Point> waypoints;
  double length = 0.0;
  Metric metric = Metric::kL2;
};

double path_length(std::span<const Point> waypoints, Metric metric);

/// Shortest paths inside P through the reflex-vertex visibility graph.
/// The reflex graph is built once; queries are thread-safe.
class GeodesicRouter {
 public:
  GeodesicRouter(const Polygon& poly, Metric metric);

  GeodesicPath path(Point a, Point b) const;
  double distance(Point a, Point b) const;

  /// Reflex vertices visible from p with their straight-line distance.
  std::vector<std::pair<std::size_t, double>> visible_reflex(Point p) const;
  /// Geodesic distances from p to every reflex vertex (index order of
  /// Polygon::reflex_indices()).
  std::vector<double> reflex_distances(Point p) const;
  const std::vector<Point>& reflex_points() const { return reflex_; }
  const Polygon& polygon() const { return poly_; }
  Metric metric() const { return metric_; }

 private:
  Polygon poly_;
  Metric metric_;
  std::vector<Point> reflex_;
  std::vector<std::vector<double>> apsp_;   // reflex x reflex
  std::vector<std::vector<int>> next_hop_;  // first hop on shortest path
};

GeodesicPath geodesic_shortest_path(const Polygon& poly, Point a, Point b,
                                    Metric metric);

}  // namespace kwatch
