#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kwatch/geometry.hpp"

namespace kwatch {

using Ring = std::vector<Point>;

struct VisibilityRegion {
  Ring boundary;  // counterclockwise, may touch P's boundary
  std::string source;
};

/// Circular arc, counterclockwise from start_angle to end_angle (radians).
struct Arc {
  Point center;
  double radius = 0.0;
  double start_angle = 0.0;
  double end_angle = 0.0;
};

using BoundaryElement = std::variant<Segment, Arc>;

/// Default angular resolution for polygonizing arcs. The sagitta of one
/// step is r(1 - cos(0.025)) < 3.2e-4 r.
inline constexpr double kArcStep = 0.05;
/// Relative area tolerance used when comparing float-based areas.
inline constexpr double kAreaTolerance = 1e-3;

/// Exact visibility polygon of a point by angular ray casting.
VisibilityRegion visibility_polygon(const Polygon& poly, Point source);

/// Weak visibility polygon of a segment, as the union of point visibility
/// polygons over segment_witnesses().
VisibilityRegion visibility_polygon(const Polygon& poly, const Segment& source);

/// Witness points on a segment: endpoints, crossings with every line through
/// a reflex vertex and another vertex, and a uniform refinement.
std::vector<Point> segment_witnesses(const Polygon& poly, const Segment& s);

/// Union of rings, snapped to an integer lattice of pitch
/// kGeomTolerance * scale. Outer boundaries only are returned counterclockwise;
/// holes clockwise.
std::vector<Ring> union_rings(std::span<const Ring> rings, double scale);
double union_area(std::span<const Ring> rings, double scale);
/// Intersection of two ring unions on the same lattice.
std::vector<Ring> intersect_rings(std::span<const Ring> a, std::span<const Ring> b,
                                  double scale);

/// Area of the union of V(w) over the witness points, plus any extra rings.
double witness_visible_area(const Polygon& poly, std::span<const Point> witnesses,
                            std::span<const Ring> extra_rings = {});

/// |V(route_1) U ... U V(route_k)|; routes are polylines inside P.
double route_visible_area(const Polygon& poly, std::span<const GeodesicPath> routes);

/// |X U V(dX)| for a closed region X given by its ordered boundary chain.
double region_visible_area(const Polygon& poly, std::span<const BoundaryElement> boundary,
                           double interior_area, double arc_step = kArcStep);

/// Polygonizes an arc including both endpoints.
std::vector<Point> sample_arc(const Arc& arc, double arc_step = kArcStep);

}  // namespace kwatch
