#include "kwatch/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace kwatch {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSelfIntersecting: return "SelfIntersecting";
    case ErrorCode::kNotClosed: return "NotClosed";
    case ErrorCode::kNotOrthogonal: return "NotOrthogonal";
    case ErrorCode::kNonIntegerCoordinates: return "NonIntegerCoordinates";
    case ErrorCode::kDegenerateCollinearRun: return "DegenerateCollinearRun";
    case ErrorCode::kPointOutsidePolygon: return "PointOutsidePolygon";
    case ErrorCode::kSourceOutsidePolygon: return "SourceOutsidePolygon";
    case ErrorCode::kRouteOutsidePolygon: return "RouteOutsidePolygon";
    case ErrorCode::kRegionOutsidePolygon: return "RegionOutsidePolygon";
    case ErrorCode::kStartNotOnBoundary: return "StartNotOnBoundary";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kQuotaExceedsArea: return "QuotaExceedsArea";
    case ErrorCode::kBudgetInfeasible: return "BudgetInfeasible";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
  }
  return "Unknown";
}

double signed_area(std::span<const Point> ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * twice;
}

double polygon_area(const Polygon& poly) {
  return std::abs(signed_area(poly.vertices()));
}

double Polygon::perimeter() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += l2(vertex(i), vertex(i + 1));
  return total;
}

double point_segment_distance(Point p, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return l2(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return l2(p, s.a + d * t);
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment_collinear(Point p, const Segment& s) {
  return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
         std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

}  // namespace

bool segments_intersect_exact(const Segment& s, const Segment& t) {
  const int o1 = sign(orient(s.a, s.b, t.a));
  const int o2 = sign(orient(s.a, s.b, t.b));
  const int o3 = sign(orient(t.a, t.b, s.a));
  const int o4 = sign(orient(t.a, t.b, s.b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_collinear(t.a, s)) return true;
  if (o2 == 0 && on_segment_collinear(t.b, s)) return true;
  if (o3 == 0 && on_segment_collinear(s.a, t)) return true;
  if (o4 == 0 && on_segment_collinear(s.b, t)) return true;
  return false;
}

bool segments_intersect(const Segment& s, const Segment& t, double tol) {
  if (segments_intersect_exact(s, t)) return true;
  if (tol <= 0.0) return false;
  return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                   point_segment_distance(t.a, s), point_segment_distance(t.b, s)}) <= tol;
}

bool ring_contains(std::span<const Point> ring, Point p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

Location locate(const Polygon& poly, Point p) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (point_segment_distance(p, poly.edge(i)) <= poly.tolerance()) {
      return Location::kBoundary;
    }
  }
  return ring_contains(poly.vertices(), p) ? Location::kInside : Location::kOutside;
}

Polygon validate_polygon(std::vector<Point> v, bool require_orthogonal) {
  if (v.size() >= 2 && v.front() == v.back()) v.pop_back();
  if (v.size() < 3) {
    throw Error(ErrorCode::kNotClosed, "polygon needs at least 3 distinct vertices");
  }
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == v[(i + 1) % n]) {
      throw Error(ErrorCode::kNotClosed, "repeated consecutive vertex");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[(i + n - 1) % n];
    const Point& b = v[i];
    const Point& c = v[(i + 1) % n];
    if (orient(a, b, c) == 0.0) {
      throw Error(ErrorCode::kDegenerateCollinearRun,
                  "collinear consecutive edges at vertex " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Segment ei{v[i], v[(i + 1) % n]};
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      const Segment ej{v[j], v[(j + 1) % n]};
      if (segments_intersect_exact(ei, ej)) {
        throw Error(ErrorCode::kSelfIntersecting,
                    "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
    }
  }

  bool axis = true;
  bool integral = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.x != b.x && a.y != b.y) axis = false;
    if (a.x != std::round(a.x) || a.y != std::round(a.y)) integral = false;
  }
  if (require_orthogonal && !axis) {
    throw Error(ErrorCode::kNotOrthogonal, "polygon has a non axis-parallel edge");
  }
  if (require_orthogonal && !integral) {
    throw Error(ErrorCode::kNonIntegerCoordinates, "orthogonal mode needs integer vertices");
  }

  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());

  Polygon poly;
  poly.vertices_ = std::move(v);
  poly.orthogonal_ = axis;
  poly.integral_ = integral;
  poly.reflex_.assign(n, false);
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly.vertices_[(i + n - 1) % n];
    const Point& b = poly.vertices_[i];
    const Point& c = poly.vertices_[(i + 1) % n];
    if (orient(a, b, c) < 0.0) {
      poly.reflex_[i] = true;
      poly.reflex_ids_.push_back(i);
    }
    minx = std::min(minx, b.x);
    maxx = std::max(maxx, b.x);
    miny = std::min(miny, b.y);
    maxy = std::max(maxy, b.y);
  }
  poly.diam_ = std::hypot(maxx - minx, maxy - miny);
  poly.tol_ = kGeomTolerance * std::max(1.0, poly.diam_);
  return poly;
}

bool point_sees_point(const Polygon& poly, Point a, Point b) {
  if (!contains(poly, a) || !contains(poly, b)) {
    throw Error(ErrorCode::kPointOutsidePolygon, "visibility query outside polygon");
  }
  if (a == b) return true;
  const Point r = b - a;
  const double len2 = dot(r, r);
  const double tol = poly.tolerance();
  std::vector<double> ts{0.0, 1.0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const Point q = e.b - e.a;
    const double denom = cross(r, q);
    if (denom != 0.0) {
      const double t = cross(e.a - a, q) / denom;
      const double u = cross(e.a - a, r) / denom;
      if (t > 0.0 && t < 1.0 && u >= -1e-12 && u <= 1.0 + 1e-12) ts.push_back(t);
    }
    // Vertices touching the segment, including collinear overlaps.
    if (point_segment_distance(e.a, {a, b}) <= tol) {
      ts.push_back(std::clamp(dot(e.a - a, r) / len2, 0.0, 1.0));
    }
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] <= 1e-12) continue;
    const Point mid = a + r * (0.5 * (ts[i] + ts[i + 1]));
    if (locate(poly, mid) == Location::kOutside) return false;
  }
  return true;
}

double path_length(std::span<const Point> waypoints, Metric metric) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    total += distance(waypoints[i], waypoints[i + 1], metric);
  }
  return total;
}

GeodesicRouter::GeodesicRouter(const Polygon& poly, Metric metric)
    : poly_(poly), metric_(metric) {
  for (std::size_t id : poly_.reflex_indices()) reflex_.push_back(poly_[id]);
  const std::size_t r = reflex_.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  apsp_.assign(r, std::vector<double>(r, kInf));
  next_hop_.assign(r, std::vector<int>(r, -1));
  for (std::size_t i = 0; i < r; ++i) {
    apsp_[i][i] = 0.0;
    next_hop_[i][i] = static_cast<int>(i);
    for (std::size_t j = i + 1; j < r; ++j) {
      if (point_sees_point(poly_, reflex_[i], reflex_[j])) {
        apsp_[i][j] = apsp_[j][i] = kwatch::distance(reflex_[i], reflex_[j], metric_);
        next_hop_[i][j] = static_cast<int>(j);
        next_hop_[j][i] = static_cast<int>(i);
      }
    }
  }
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < r; ++i) {
      if (apsp_[i][k] == kInf) continue;
      for (std::size_t j = 0; j < r; ++j) {
        const double via = apsp_[i][k] + apsp_[k][j];
        if (via < apsp_[i][j]) {
          apsp_[i][j] = via;
          next_hop_[i][j] = next_hop_[i][k];
        }
      }
    }
  }
}

std::vector<std::pair<std::size_t, double>> GeodesicRouter::visible_reflex(Point p) const {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < reflex_.size(); ++i) {
    if (point_sees_point(poly_, p, reflex_[i])) {
      out.emplace_back(i, kwatch::distance(p, reflex_[i], metric_));
    }
  }
  return out;
}

std::vector<double> GeodesicRouter::reflex_distances(Point p) const {
  std::vector<double> out(reflex_.size(), std::numeric_limits<double>::infinity());
  for (auto [u, d] : visible_reflex(p)) {
    for (std::size_t w = 0; w < reflex_.size(); ++w) {
      out[w] = std::min(out[w], d + apsp_[u][w]);
    }
  }
  return out;
}

GeodesicPath GeodesicRouter::path(Point a, Point b) const {
  if (!contains(poly_, a) || !contains(poly_, b)) {
    throw Error(ErrorCode::kPointOutsidePolygon, "path endpoint outside polygon");
  }
  GeodesicPath out;
  out.metric = metric_;
  if (point_sees_point(poly_, a, b)) {
    out.waypoints = {a, b};
    out.length = kwatch::distance(a, b, metric_);
    return out;
  }
  const auto from_a = visible_reflex(a);
  const auto from_b = visible_reflex(b);
  double best = std::numeric_limits<double>::infinity();
  std::size_t bu = 0, bw = 0;
  for (auto [u, du] : from_a) {
    for (auto [w, dw] : from_b) {
      const double total = du + apsp_[u][w] + dw;
      if (total < best) {
        best = total;
        bu = u;
        bw = w;
      }
    }
  }
  out.waypoints.push_back(a);
  for (std::size_t cur = bu;; cur = static_cast<std::size_t>(next_hop_[cur][bw])) {
    out.waypoints.push_back(reflex_[cur]);
    if (cur == bw) break;
  }
  out.waypoints.push_back(b);
  out.length = best;
  return out;
}

double GeodesicRouter::distance(Point a, Point b) const { return path(a, b).length; }

GeodesicPath geodesic_shortest_path(const Polygon& poly, Point a, Point b, Metric metric) {
  return GeodesicRouter(poly, metric).path(a, b);
}

}  // namespace kwatch
