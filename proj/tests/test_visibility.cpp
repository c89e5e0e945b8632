#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "kwatch/visibility.hpp"

using namespace kwatch;
using namespace kwatch::testing;

namespace {

// Fraction-of-grid estimate of |{x in P : some witness sees x}|.
double monte_carlo_visible_area(const Polygon& poly, const std::vector<Point>& witnesses, int nx,
                                int ny) {
  double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
  for (const Point& p : poly.vertices()) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double cw = (maxx - minx) / nx, ch = (maxy - miny) / ny;
  int seen = 0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Point x{minx + (i + 0.5) * cw, miny + (j + 0.5) * ch};
      if (!oracle_contains(poly, x)) continue;
      for (const Point& w : witnesses) {
        if (point_sees_point(poly, x, w)) {
          ++seen;
          break;
        }
      }
    }
  }
  return seen * cw * ch;
}

}  // namespace

TEST_CASE("visibility_polygon of a point") {
  const auto sq = visibility_polygon(unit_square(), Point{0, 0});
  CHECK(signed_area(sq.boundary) == doctest::Approx(1.0));

  const Polygon l = l_shape();
  const auto vl = visibility_polygon(l, Point{0, 0});
  CHECK(signed_area(vl.boundary) == doctest::Approx(12.0));
  for (const Point& v : l.vertices()) CHECK(point_sees_point(l, {0, 0}, v));

  const Polygon u = u_shape();
  const auto vu = visibility_polygon(u, Point{4, 0});
  CHECK_FALSE(ring_contains(vu.boundary, {1, 4}));
  CHECK(ring_contains(vu.boundary, {1, 1}));
  // Bottom strip 18, left arm wedge under y = 4 - x gives 2, right arm wedge
  // under y = 2(x - 4)/3 gives 4/3.
  CHECK(signed_area(vu.boundary) == doctest::Approx(18.0 + 2.0 + 4.0 / 3.0).epsilon(1e-6));
  CHECK(monte_carlo_visible_area(u, {{4, 0}}, 180, 100) ==
        doctest::Approx(18.0 + 2.0 + 4.0 / 3.0).epsilon(0.01));

  CHECK_THROWS_AS(visibility_polygon(u, Point{4, 4}), Error);
}

TEST_CASE("visibility polygon contains its source and its vertices are visible") {
  const Polygon u = u_shape();
  for (const Point& src : std::vector<Point>{{4, 0}, {1, 1}, {2, 2}, {8, 4.5}, {7, 2}, {0, 5}}) {
    const auto region = visibility_polygon(u, src);
    const double tol = 1e-6;
    bool has_src = ring_contains(region.boundary, src);
    for (std::size_t i = 0; i < region.boundary.size(); ++i) {
      const Segment e{region.boundary[i], region.boundary[(i + 1) % region.boundary.size()]};
      if (point_segment_distance(src, e) <= tol) has_src = true;
    }
    CHECK(has_src);
    for (const Point& v : region.boundary) {
      CHECK(oracle_sees(u, src, v + (src - v) * 1e-9, 2000));
    }
  }
}

TEST_CASE("segment visibility polygon") {
  const Polygon u = u_shape();
  const auto whole = visibility_polygon(u, Segment{{2, 0}, {7, 0}});
  CHECK(signed_area(whole.boundary) == doctest::Approx(30.0).epsilon(1e-6));
  const auto part = visibility_polygon(u, Segment{{4, 0}, {5, 0}});
  CHECK(signed_area(part.boundary) < 30.0);
  CHECK(signed_area(part.boundary) >= signed_area(visibility_polygon(u, Point{4, 0}).boundary) - 1e-9);
}

TEST_CASE("route_visible_area examples") {
  const GeodesicPath at_origin{{{0, 0}}, 0.0, Metric::kL1};
  CHECK(route_visible_area(unit_square(), std::vector{at_origin}) == doctest::Approx(1.0));

  const Polygon u = u_shape();
  const GeodesicPath left{{{4, 0}, {2, 0}, {4, 0}}, 4.0, Metric::kL1};
  const GeodesicPath right{{{4, 0}, {7, 0}, {4, 0}}, 6.0, Metric::kL1};
  CHECK(route_visible_area(u, std::vector{left, right}) == doctest::Approx(30.0).epsilon(1e-6));

  const GeodesicPath stay{{{4, 0}}, 0.0, Metric::kL1};
  const double partial = route_visible_area(u, std::vector{stay});
  CHECK(partial < 30.0);
  CHECK(partial == doctest::Approx(18.0 + 2.0 + 4.0 / 3.0).epsilon(1e-6));

  const GeodesicPath outside{{{4, 0}, {4, 4}}, 4.0, Metric::kL1};
  CHECK_THROWS_AS(route_visible_area(u, std::vector{outside}), Error);
}

TEST_CASE("route_visible_area is monotone along route prefixes and bounded by |P|") {
  const Polygon u = u_shape();
  const std::vector<Point> tour{{4, 0}, {5, 0}, {6, 0}, {6.5, 1}, {7.5, 1.5}, {8, 3}};
  double prev = 0.0;
  for (std::size_t n = 1; n <= tour.size(); ++n) {
    const GeodesicPath prefix{{tour.begin(), tour.begin() + n}, 0.0, Metric::kL2};
    const double a = route_visible_area(u, std::vector{prefix});
    CHECK(a >= prev - 1e-9);
    CHECK(a <= polygon_area(u) + 1e-9);
    prev = a;
  }
}

TEST_CASE("region_visible_area examples") {
  const Polygon sq = unit_square();
  const std::vector<BoundaryElement> whole{Segment{{0, 0}, {1, 0}}, Segment{{1, 0}, {1, 1}},
                                           Segment{{1, 1}, {0, 1}}, Segment{{0, 1}, {0, 0}}};
  CHECK(region_visible_area(sq, whole, 1.0) == doctest::Approx(1.0));

  const std::vector<BoundaryElement> quarter{Segment{{0, 0}, {1, 0}},
                                             Arc{{0, 0}, 1.0, 0.0, std::numbers::pi / 2},
                                             Segment{{0, 1}, {0, 0}}};
  CHECK(region_visible_area(sq, quarter, std::numbers::pi / 4) == doctest::Approx(1.0));

  // Geodesic disk of radius 2 at (4,0) in the U-shape is a plain half disk.
  const Polygon u = u_shape();
  const Arc half{{4, 0}, 2.0, 0.0, std::numbers::pi};
  const std::vector<BoundaryElement> disk{Segment{{2, 0}, {6, 0}}, half};
  const double area = region_visible_area(u, disk, 2.0 * std::numbers::pi);
  std::vector<Point> witnesses = sample_arc(half, 0.01);
  for (int i = 0; i <= 40; ++i) witnesses.push_back({2.0 + 0.1 * i, 0.0});
  const double oracle = monte_carlo_visible_area(u, witnesses, 90, 50);
  CHECK(area == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("region_visible_area is monotone in nested disks") {
  const Polygon u = u_shape();
  double prev = 0.0;
  for (double r : {0.5, 1.0, 1.5, 2.0}) {
    const std::vector<BoundaryElement> disk{Segment{{4 - r, 0}, {4 + r, 0}},
                                            Arc{{4, 0}, r, 0.0, std::numbers::pi}};
    const double a = region_visible_area(u, disk, 0.5 * std::numbers::pi * r * r);
    CHECK(a >= prev - 1e-6);
    prev = a;
  }
}
