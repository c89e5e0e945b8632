#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "kwatch/cuts_grid.hpp"

using namespace kwatch;
using namespace kwatch::testing;

namespace {

std::vector<Point> interior_samples(const Polygon& poly, int count, unsigned seed) {
  std::mt19937 rng(seed);
  double maxx = 0, maxy = 0;
  for (const Point& p : poly.vertices()) {
    maxx = std::max(maxx, p.x);
    maxy = std::max(maxy, p.y);
  }
  std::uniform_real_distribution<double> ux(0, maxx), uy(0, maxy);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    const Point p{ux(rng), uy(rng)};
    if (oracle_contains(poly, p)) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("compute_essential_cuts examples") {
  CHECK(compute_essential_cuts(unit_square(), {0, 0}).m() == 0);
  CHECK(compute_essential_cuts(l_shape(), {0, 0}).m() == 0);

  const auto l = compute_essential_cuts(l_shape(), {4, 0});
  REQUIRE(l.m() == 1);
  CHECK(l.cuts[0].reflex_vertex == Point{2, 2});
  CHECK(l.cuts[0].far_endpoint == Point{2, 0});
  CHECK(l.cuts[0].axis == Axis::kVertical);
  CHECK(signed_area(l.cuts[0].pocket) == doctest::Approx(8.0));

  const auto u = compute_essential_cuts(u_shape(), {4, 0});
  REQUIRE(u.m() == 2);
  CHECK(u.cuts[0].reflex_vertex.x == 7.0);
  CHECK(u.cuts[0].far_endpoint == Point{7, 0});
  CHECK(u.cuts[1].reflex_vertex.x == 2.0);
  CHECK(u.cuts[1].far_endpoint == Point{2, 0});
  for (const Cut& c : u.cuts) CHECK(signed_area(c.pocket) == doctest::Approx(10.0));

  // The middle tooth is seen on the way to the left one.
  CHECK(compute_essential_cuts(comb_shape(), {6, 0}).m() == 2);
  CHECK(compute_visibility_cuts(comb_shape(), {6, 0}).size() == 3);
  CHECK_THROWS_AS(compute_essential_cuts(u_shape(), {4, 1}), Error);
}

TEST_CASE("essential pockets are pairwise non-nested; pockets cover what s cannot see") {
  for (const auto& [poly, s] : cases()) {
    const auto cuts = compute_essential_cuts(poly, s);
    for (std::size_t i = 0; i < cuts.m(); ++i) {
      CHECK(cuts.cuts[i].boundary_index == i);
      CHECK(locate(poly, s) == Location::kBoundary);
      for (std::size_t j = 0; j < cuts.m(); ++j) {
        if (i == j) continue;
        const Cut& a = cuts.cuts[i];
        const Cut& b = cuts.cuts[j];
        CHECK_FALSE((a.pocket_begin <= b.pocket_begin && b.pocket_end <= a.pocket_end));
      }
      // The pocket lies on the far side from s.
      CHECK_FALSE(ring_contains(cuts.cuts[i].pocket, s));
    }
    const auto all = compute_visibility_cuts(poly, s);
    for (const Point& x : interior_samples(poly, 300, 3)) {
      if (point_sees_point(poly, s, x)) continue;
      bool in_pocket = false;
      for (const Cut& c : all) in_pocket = in_pocket || ring_contains(c.pocket, x);
      CHECK(in_pocket);
    }
    // Every visibility pocket holds an essential one.
    for (const Cut& c : all) {
      bool holds = false;
      for (const Cut& e : cuts.cuts)
        holds = holds || (c.pocket_begin <= e.pocket_begin && e.pocket_end <= c.pocket_end);
      CHECK(holds);
    }
  }
}

TEST_CASE("build_hanan_grid examples") {
  const Polygon sq = unit_square();
  const auto gs = build_hanan_grid(sq, {0, 0}, compute_essential_cuts(sq, {0, 0}));
  CHECK(gs.size() == 4);
  CHECK(gs.distance(gs.s_node(), *gs.find({1, 1})) == 2);

  const Polygon l = l_shape();
  const auto gl = build_hanan_grid(l, {4, 0}, compute_essential_cuts(l, {4, 0}));
  const std::vector<Point> expect{{0, 0}, {0, 2}, {0, 4}, {2, 0}, {2, 2}, {2, 4}, {4, 0}, {4, 2}};
  CHECK(gl.nodes() == expect);
  CHECK(gl.distance(gl.s_node(), *gl.find({0, 4})) == 8);
  const auto path = gl.path(gl.s_node(), *gl.find({0, 4}));
  CHECK(path.front() == gl.s_node());
  CHECK(gl.node(path.back()) == Point{0, 4});

  const Polygon u = u_shape();
  const auto gu = build_hanan_grid(u, {4, 0}, compute_essential_cuts(u, {4, 0}));
  CHECK(gu.distance(*gu.find({2, 0}), *gu.find({7, 0})) == 5);
  CHECK(gu.find({4, 0}) == gu.s_node());
}

TEST_CASE("contact_point examples") {
  const Polygon l = l_shape();
  const auto cuts = compute_essential_cuts(l, {4, 0});
  const auto g = build_hanan_grid(l, {4, 0}, cuts);
  auto c = contact_point(g, g.s_node(), 0);
  CHECK(g.node(c.node) == Point{2, 0});
  CHECK(c.distance == 2);
  c = contact_point(g, *g.find({4, 2}), 0);
  CHECK(g.node(c.node) == Point{2, 2});
  CHECK(c.distance == 2);
  c = contact_point(g, *g.find({2, 0}), 0);
  CHECK(g.node(c.node) == Point{2, 0});
  CHECK(c.distance == 0);
}

TEST_CASE("contact_point takes the candidate nearest the reflex vertex") {
  for (const auto& [poly, s] : cases()) {
    const auto cuts = compute_essential_cuts(poly, s);
    const auto g = build_hanan_grid(poly, s, cuts);
    for (std::size_t j = 0; j < cuts.m(); ++j) {
      for (std::size_t i = 0; i < cuts.m(); ++i) {
        for (auto from : g.cut_nodes(i)) {
          const auto all = contact_candidates(g, from, j);
          REQUIRE_FALSE(all.empty());
          const auto best = contact_point(g, from, j);
          for (const Contact& c : all) {
            CHECK(c.distance == best.distance);
            CHECK(l1(g.node(best.node), cuts.cuts[j].reflex_vertex) <=
                  l1(g.node(c.node), cuts.cuts[j].reflex_vertex));
          }
          for (auto other : g.cut_nodes(j)) CHECK(g.distance(from, other) >= best.distance);
        }
      }
    }
  }
}

TEST_CASE("grid invariants hold on every fixture") {
  for (const auto& [poly, s] : cases()) {
    const auto cuts = compute_essential_cuts(poly, s);
    const auto g = build_hanan_grid(poly, s, cuts, {.full_apsp = true, .threads = 2});
    const GeodesicRouter router(poly, Metric::kL1);
    CHECK(g.node(g.s_node()) == s);
    for (const Cut& c : cuts.cuts) {
      CHECK(g.find(c.reflex_vertex).has_value());
      CHECK(g.find(c.far_endpoint).has_value());
    }
    for (std::size_t j = 0; j < cuts.m(); ++j) {
      for (auto id : g.cut_nodes(j)) CHECK(cuts.cuts[j].contains(g.node(id)));
    }
    const auto n = static_cast<HananGrid::NodeId>(g.size());
    for (HananGrid::NodeId a = 0; a < n; ++a) {
      CHECK(contains(poly, g.node(a)));
      CHECK(g.distance(a, a) == 0);
      for (HananGrid::NodeId b = 0; b < n; ++b) {
        const Length d = g.distance(a, b);
        CHECK(d == g.distance(b, a));
        // Grid paths are as short as unrestricted L1 geodesics.
        CHECK(static_cast<double>(d) == doctest::Approx(router.distance(g.node(a), g.node(b))));
        for (HananGrid::NodeId c = 0; c < n; c += 3) CHECK(g.distance(a, c) <= d + g.distance(b, c));
      }
    }
  }
}

TEST_CASE("grid distance is Manhattan in a rectangle") {
  const Polygon r = validate_polygon({{0, 0}, {5, 0}, {5, 3}, {0, 3}}, true);
  const auto g = build_hanan_grid(r, {2, 0}, compute_essential_cuts(r, {2, 0}), {.full_apsp = true});
  for (HananGrid::NodeId a = 0; a < static_cast<HananGrid::NodeId>(g.size()); ++a)
    for (HananGrid::NodeId b = 0; b < static_cast<HananGrid::NodeId>(g.size()); ++b)
      CHECK(static_cast<double>(g.distance(a, b)) == l1(g.node(a), g.node(b)));
}
