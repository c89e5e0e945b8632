#include "kwatch/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/polygon/polygon.hpp>

namespace kwatch {

namespace gtl = boost::polygon;

namespace {

constexpr double kPi = std::numbers::pi;
// Angular offset of the side rays cast past every vertex.
constexpr double kSideRay = 1e-7;
constexpr int kProbeRays = 16;

double normalize_angle(double a) {
  while (a <= -kPi) a += 2.0 * kPi;
  while (a > kPi) a -= 2.0 * kPi;
  return a;
}

// Which directions leave `o` into the interior of P.
class DirectionFilter {
 public:
  DirectionFilter(const Polygon& poly, Point o) {
    const double tol = poly.tolerance();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (l2(poly[i], o) <= tol) {
        kind_ = Kind::kVertex;
        out_ = std::atan2(poly.vertex(i + 1).y - o.y, poly.vertex(i + 1).x - o.x);
        const Point prev = poly.vertex(i + poly.size() - 1);
        double in = std::atan2(prev.y - o.y, prev.x - o.x) - out_;
        while (in <= 0.0) in += 2.0 * kPi;
        wedge_ = in;
        return;
      }
    }
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Segment e = poly.edge(i);
      if (point_segment_distance(o, e) <= tol) {
        kind_ = Kind::kEdge;
        edge_dir_ = e.b - e.a;
        edge_dir_ = edge_dir_ * (1.0 / norm(edge_dir_));
        return;
      }
    }
  }

  bool on_boundary() const { return kind_ != Kind::kInterior; }

  bool valid(double angle) const {
    switch (kind_) {
      case Kind::kInterior:
        return true;
      case Kind::kEdge:
        return cross(edge_dir_, {std::cos(angle), std::sin(angle)}) > 1e-12;
      case Kind::kVertex: {
        double rel = angle - out_;
        while (rel < 0.0) rel += 2.0 * kPi;
        while (rel >= 2.0 * kPi) rel -= 2.0 * kPi;
        return rel > 1e-12 && rel < wedge_ - 1e-12;
      }
    }
    return false;
  }

 private:
  enum class Kind { kInterior, kEdge, kVertex };
  Kind kind_ = Kind::kInterior;
  Point edge_dir_;
  double out_ = 0.0;
  double wedge_ = 0.0;
};

double cast_ray(const Polygon& poly, Point o, Point d) {
  const double tol = poly.tolerance();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    if (point_segment_distance(o, e) <= tol) continue;
    const Point q = e.b - e.a;
    const double denom = cross(d, q);
    if (denom == 0.0) continue;
    const double t = cross(e.a - o, q) / denom;
    const double u = cross(e.a - o, d) / denom;
    if (t > tol && u >= -1e-12 && u <= 1.0 + 1e-12) best = std::min(best, t);
  }
  return best;
}

Point snap_inside(const Polygon& poly, Point p, ErrorCode code) {
  if (contains(poly, p)) return p;
  // Points produced by float arithmetic can land a hair outside.
  double best = std::numeric_limits<double>::infinity();
  Point snapped = p;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const Point d = e.b - e.a;
    const double t = std::clamp(dot(p - e.a, d) / dot(d, d), 0.0, 1.0);
    const Point c = e.a + d * t;
    const double dist = l2(p, c);
    if (dist < best) {
      best = dist;
      snapped = c;
    }
  }
  if (best > 1e-6 * std::max(1.0, poly.diameter())) {
    throw Error(code, "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") lies outside the polygon");
  }
  return snapped;
}

}  // namespace

VisibilityRegion visibility_polygon(const Polygon& poly, Point o) {
  if (!contains(poly, o)) {
    throw Error(ErrorCode::kSourceOutsidePolygon, "visibility source outside polygon");
  }
  const DirectionFilter filter(poly, o);
  std::vector<double> angles;
  angles.reserve(3 * poly.size() + kProbeRays);
  for (const Point& v : poly.vertices()) {
    if (l2(v, o) <= poly.tolerance()) continue;
    const double a = std::atan2(v.y - o.y, v.x - o.x);
    angles.push_back(normalize_angle(a - kSideRay));
    angles.push_back(a);
    angles.push_back(normalize_angle(a + kSideRay));
  }
  for (int i = 0; i < kProbeRays; ++i) {
    angles.push_back(normalize_angle(-kPi + (i + 0.5) * 2.0 * kPi / kProbeRays));
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

  struct Ray {
    bool valid;
    Point hit;
  };
  std::vector<Ray> rays;
  rays.reserve(angles.size());
  for (double a : angles) {
    if (!filter.valid(a)) {
      rays.push_back({false, o});
      continue;
    }
    const Point d{std::cos(a), std::sin(a)};
    const double t = cast_ray(poly, o, d);
    if (!std::isfinite(t)) {
      rays.push_back({false, o});
      continue;
    }
    rays.push_back({true, o + d * t});
  }

  VisibilityRegion out;
  out.source = "point";
  const auto first_invalid =
      std::find_if(rays.begin(), rays.end(), [](const Ray& r) { return !r.valid; });
  if (first_invalid == rays.end()) {
    for (const Ray& r : rays) out.boundary.push_back(r.hit);
  } else {
    std::rotate(rays.begin(), first_invalid, rays.end());
    bool in_gap = false;
    for (const Ray& r : rays) {
      if (!r.valid) {
        if (!in_gap) out.boundary.push_back(o);
        in_gap = true;
        continue;
      }
      in_gap = false;
      out.boundary.push_back(r.hit);
    }
  }
  Ring cleaned;
  for (const Point& p : out.boundary) {
    if (cleaned.empty() || l2(cleaned.back(), p) > 1e-12) cleaned.push_back(p);
  }
  while (cleaned.size() > 1 && l2(cleaned.front(), cleaned.back()) <= 1e-12) cleaned.pop_back();
  out.boundary = std::move(cleaned);
  return out;
}

std::vector<Point> segment_witnesses(const Polygon& poly, const Segment& s) {
  const Point r = s.b - s.a;
  const double len = norm(r);
  std::vector<double> ts{0.0, 1.0};
  if (len > poly.tolerance()) {
    const int pieces =
        std::clamp(static_cast<int>(std::ceil(64.0 * len / std::max(poly.diameter(), 1e-12))), 1, 64);
    for (int i = 1; i < pieces; ++i) ts.push_back(static_cast<double>(i) / pieces);
    for (std::size_t ri : poly.reflex_indices()) {
      const Point u = poly[ri];
      for (std::size_t j = 0; j < poly.size(); ++j) {
        if (j == ri) continue;
        const Point q = poly[j] - u;
        const double denom = cross(r, q);
        if (denom == 0.0) continue;
        const double t = cross(u - s.a, q) / denom;
        if (t > 0.0 && t < 1.0) ts.push_back(t);
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  std::vector<Point> out;
  double last = -1.0;
  for (double t : ts) {
    if (t - last <= 1e-9) continue;
    last = t;
    out.push_back(s.a + r * t);
  }
  return out;
}

VisibilityRegion visibility_polygon(const Polygon& poly, const Segment& source) {
  if (!contains(poly, source.a) || !contains(poly, source.b) ||
      !point_sees_point(poly, source.a, source.b)) {
    throw Error(ErrorCode::kSourceOutsidePolygon, "visibility source outside polygon");
  }
  std::vector<Ring> rings;
  for (const Point& w : segment_witnesses(poly, source)) {
    rings.push_back(visibility_polygon(poly, w).boundary);
  }
  const auto merged = union_rings(rings, poly.diameter());
  VisibilityRegion out;
  out.source = "segment";
  // The union of witnesses sharing a segment is connected; keep its outer ring.
  double best = -1.0;
  for (const Ring& ring : merged) {
    const double a = signed_area(ring);
    if (a > best) {
      best = a;
      out.boundary = ring;
    }
  }
  return out;
}

namespace {

using Coord = long long;

double lattice_pitch(double scale) { return 1e-8 * std::max(1.0, scale); }

gtl::polygon_set_data<Coord> to_set(std::span<const Ring> rings, double pitch) {
  gtl::polygon_set_data<Coord> set;
  for (const Ring& ring : rings) {
    if (ring.size() < 3) continue;
    std::vector<gtl::point_data<Coord>> pts;
    pts.reserve(ring.size());
    for (const Point& p : ring) {
      pts.emplace_back(static_cast<Coord>(std::llround(p.x / pitch)),
                       static_cast<Coord>(std::llround(p.y / pitch)));
    }
    gtl::polygon_data<Coord> poly;
    poly.set(pts.begin(), pts.end());
    set.insert(poly);
  }
  return set;
}

std::vector<Ring> from_set(const gtl::polygon_set_data<Coord>& set, double pitch) {
  std::vector<gtl::polygon_with_holes_data<Coord>> merged;
  set.get(merged);
  std::vector<Ring> out;
  auto to_ring = [&](auto begin, auto end) {
    Ring ring;
    for (auto it = begin; it != end; ++it) {
      ring.push_back({static_cast<double>(gtl::x(*it)) * pitch,
                      static_cast<double>(gtl::y(*it)) * pitch});
    }
    return ring;
  };
  for (const auto& pwh : merged) {
    Ring outer = to_ring(pwh.begin(), pwh.end());
    if (signed_area(outer) < 0.0) std::reverse(outer.begin(), outer.end());
    out.push_back(std::move(outer));
    for (auto h = pwh.begin_holes(); h != pwh.end_holes(); ++h) {
      Ring hole = to_ring(h->begin(), h->end());
      if (signed_area(hole) > 0.0) std::reverse(hole.begin(), hole.end());
      out.push_back(std::move(hole));
    }
  }
  return out;
}

}  // namespace

std::vector<Ring> union_rings(std::span<const Ring> rings, double scale) {
  const double pitch = lattice_pitch(scale);
  return from_set(to_set(rings, pitch), pitch);
}

std::vector<Ring> intersect_rings(std::span<const Ring> a, std::span<const Ring> b,
                                  double scale) {
  using namespace gtl::operators;
  const double pitch = lattice_pitch(scale);
  auto sa = to_set(a, pitch);
  const auto sb = to_set(b, pitch);
  sa &= sb;
  return from_set(sa, pitch);
}

double union_area(std::span<const Ring> rings, double scale) {
  double total = 0.0;
  for (const Ring& r : union_rings(rings, scale)) total += signed_area(r);
  return total;
}

double witness_visible_area(const Polygon& poly, std::span<const Point> witnesses,
                            std::span<const Ring> extra_rings) {
  std::vector<Ring> rings(extra_rings.begin(), extra_rings.end());
  std::vector<Point> seen;
  for (const Point& w : witnesses) {
    if (std::any_of(seen.begin(), seen.end(), [&](const Point& p) { return l2(p, w) <= 1e-12; })) {
      continue;
    }
    seen.push_back(w);
    rings.push_back(visibility_polygon(poly, w).boundary);
  }
  return union_area(rings, poly.diameter());
}

double route_visible_area(const Polygon& poly, std::span<const GeodesicPath> routes) {
  std::vector<Point> witnesses;
  for (const GeodesicPath& route : routes) {
    const auto& wp = route.waypoints;
    for (const Point& p : wp) {
      if (!contains(poly, p)) {
        throw Error(ErrorCode::kRouteOutsidePolygon, "route waypoint outside polygon");
      }
    }
    if (wp.size() == 1) witnesses.push_back(wp.front());
    for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
      if (!point_sees_point(poly, wp[i], wp[i + 1])) {
        throw Error(ErrorCode::kRouteOutsidePolygon, "route segment leaves polygon");
      }
      const auto w = segment_witnesses(poly, {wp[i], wp[i + 1]});
      witnesses.insert(witnesses.end(), w.begin(), w.end());
    }
  }
  return witness_visible_area(poly, witnesses);
}

std::vector<Point> sample_arc(const Arc& arc, double arc_step) {
  double sweep = arc.end_angle - arc.start_angle;
  while (sweep < 0.0) sweep += 2.0 * kPi;
  const int steps = std::max(1, static_cast<int>(std::ceil(sweep / arc_step)));
  std::vector<Point> out;
  out.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double a = arc.start_angle + sweep * i / steps;
    out.push_back({arc.center.x + arc.radius * std::cos(a),
                   arc.center.y + arc.radius * std::sin(a)});
  }
  return out;
}

double region_visible_area(const Polygon& poly, std::span<const BoundaryElement> boundary,
                           double interior_area, double arc_step) {
  Ring ring;
  std::vector<Point> witnesses;
  for (const BoundaryElement& el : boundary) {
    if (const auto* seg = std::get_if<Segment>(&el)) {
      const Segment s{snap_inside(poly, seg->a, ErrorCode::kRegionOutsidePolygon),
                      snap_inside(poly, seg->b, ErrorCode::kRegionOutsidePolygon)};
      ring.push_back(s.a);
      const auto w = segment_witnesses(poly, s);
      witnesses.insert(witnesses.end(), w.begin(), w.end());
    } else {
      auto pts = sample_arc(std::get<Arc>(el), arc_step);
      for (Point& p : pts) p = snap_inside(poly, p, ErrorCode::kRegionOutsidePolygon);
      ring.insert(ring.end(), pts.begin(), pts.end() - 1);
      witnesses.insert(witnesses.end(), pts.begin(), pts.end());
    }
  }
  std::vector<Ring> extra;
  if (ring.size() >= 3) extra.push_back(ring);
  return std::max(witness_visible_area(poly, witnesses, extra), interior_area);
}

}  // namespace kwatch
