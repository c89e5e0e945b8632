#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "kwatch/kwrp.hpp"

using namespace kwatch;
using namespace kwatch::testing;

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void check_routes(const KwrpContext& ctx, const Solution& sol, int k) {
  REQUIRE(sol.routes.size() == static_cast<std::size_t>(k));
  double mx = 0.0;
  for (std::size_t i = 0; i < sol.routes.size(); ++i) {
    const GeodesicPath& r = sol.routes[i];
    CHECK(r.waypoints.front() == ctx.s);
    CHECK(r.waypoints.back() == ctx.s);
    CHECK(path_length(r.waypoints, r.metric) == doctest::Approx(r.length));
    CHECK(sol.per_route_lengths[i] == r.length);
    for (std::size_t w = 1; w < r.waypoints.size(); ++w)
      CHECK(point_sees_point(ctx.poly, r.waypoints[w - 1], r.waypoints[w]));
    // Reported grid length is the sum of table distances between contacts.
    if (r.metric == Metric::kL1) {
      std::vector<Point> stops{ctx.s};
      stops.insert(stops.end(), sol.contacts[i].begin(), sol.contacts[i].end());
      stops.push_back(ctx.s);
      Length sum = 0;
      for (std::size_t w = 1; w < stops.size(); ++w)
        sum += ctx.grid.distance(*ctx.grid.find(stops[w - 1]), *ctx.grid.find(stops[w]));
      CHECK(static_cast<double>(sum) == r.length);
    }
    mx = std::max(mx, r.length);
  }
  CHECK(sol.max_length == mx);
}

}  // namespace

TEST_CASE("single_route_opt examples") {
  CHECK(single_route_opt(make_context(unit_square(), {0, 0})).length == 0);
  const auto l = single_route_opt(make_context(l_shape(), {4, 0}));
  CHECK(l.length == 4);
  CHECK(l.route.waypoints == std::vector<Point>{{4, 0}, {2, 0}, {4, 0}});
  CHECK(single_route_opt(make_context(u_shape(), {4, 0})).length == 10);
}

TEST_CASE("exact_dp examples") {
  const auto sq = exact_dp(make_context(unit_square(), {0, 0}), 3);
  CHECK(sq.max_length == 0.0);
  CHECK(sq.routes.size() == 3);

  const auto lctx = make_context(l_shape(), {4, 0});
  CHECK(exact_dp(lctx, 1).max_length == 4.0);
  const auto l2 = exact_dp(lctx, 2);
  CHECK(l2.max_length == 4.0);
  CHECK(sorted(l2.per_route_lengths) == std::vector<double>{0.0, 4.0});

  const auto uctx = make_context(u_shape(), {4, 0});
  const auto u2 = exact_dp(uctx, 2);
  CHECK(u2.max_length == 6.0);
  CHECK(sorted(u2.per_route_lengths) == std::vector<double>{4.0, 6.0});
  check_routes(uctx, u2, 2);
  CHECK(exact_dp(uctx, 1).max_length == 10.0);

  CHECK(exact_dp(make_context(l_shape(), {0, 0}), 2).max_length == 0.0);
}

TEST_CASE("exact_dp honours the state budget") {
  const auto ctx = make_context(hooks_shape(5), {10, 0});
  CHECK_THROWS_AS(exact_dp(ctx, 3, {.state_budget = 5}), Error);
}

TEST_CASE("fptas and l2_wrapper examples") {
  CHECK(fptas(make_context(unit_square(), {0, 0}), 2, 0.5).max_length == 0.0);
  const auto uctx = make_context(u_shape(), {4, 0});
  const auto f2 = fptas(uctx, 2, 0.5);
  CHECK(f2.max_length <= 9.0);
  CHECK(verify_cover(uctx.poly, uctx.cuts, f2.routes).pass);
  CHECK(fptas(uctx, 1, 0.1).max_length <= 11.0);

  const auto sq = l2_wrapper(make_context(unit_square(), {0, 0}), 1, 0.1);
  CHECK(sq.max_length == 0.0);
  CHECK(sq.l1_max_length == 0.0);
  const auto u = l2_wrapper(uctx, 2, 0.1);
  CHECK(u.max_length <= 6.6);
  CHECK(u.max_length == doctest::Approx(u.l1_max_length));
  const auto l = l2_wrapper(make_context(l_shape(), {4, 0}), 1, 0.1);
  CHECK(l.max_length == doctest::Approx(4.0));
  CHECK(l.l1_max_length == 4.0);
}

TEST_CASE("brute_force_oracle examples") {
  CHECK(brute_force_oracle(make_context(unit_square(), {0, 0}), 2).max_length == 0.0);
  const auto uctx = make_context(u_shape(), {4, 0});
  CHECK(brute_force_oracle(uctx, 2).max_length == 6.0);
  CHECK(brute_force_oracle(uctx, 1).max_length == 10.0);
}

TEST_CASE("verify_cover examples") {
  const auto sq = make_context(unit_square(), {0, 0});
  CHECK(verify_cover(sq.poly, sq.cuts, {{{{0, 0}}, 0.0, Metric::kL1}}).pass);

  const auto u = make_context(u_shape(), {4, 0});
  CHECK(verify_cover(u.poly, u.cuts, exact_dp(u, 2).routes).pass);
  const auto bad = verify_cover(u.poly, u.cuts, {{{{4, 0}}, 0.0, Metric::kL1}});
  CHECK_FALSE(bad.pass);
  CHECK(bad.unvisited_cuts == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(bad.invisible_samples.empty());
}

TEST_CASE("solver properties across the fixture cases") {
  for (const auto& [poly, s] : cases()) {
    const auto ctx = make_context(poly, s);
    const double L = static_cast<double>(single_route_opt(ctx).length);
    double prev = L;
    for (int k = 1; k <= 3; ++k) {
      const Solution ex = exact_dp(ctx, k);
      check_routes(ctx, ex, k);
      CHECK(ex.max_length == brute_force_oracle(ctx, k).max_length);
      if (k == 1) CHECK(ex.max_length == L);
      CHECK(ex.max_length * k >= L);
      CHECK(ex.max_length <= L);
      CHECK(ex.max_length <= prev);
      prev = ex.max_length;
      const auto cover = verify_cover(poly, ctx.cuts, ex.routes, {.samples_per_axis = 16});
      CHECK(cover.pass);
      for (double eps : {0.1, 0.5, 1.0}) {
        const Solution f = fptas(ctx, k, eps);
        check_routes(ctx, f, k);
        CHECK(ex.max_length <= f.max_length);
        CHECK(f.max_length <= (1.0 + eps) * ex.max_length + 1e-9);
      }
    }
  }
}

TEST_CASE("threaded table generation gives the same answer") {
  const auto ctx = make_context(hooks_shape(5), {10, 0});
  const auto a = exact_dp(ctx, 3);
  const auto b = exact_dp(ctx, 3, {.threads = 3});
  CHECK(a.per_route_lengths == b.per_route_lengths);
  for (std::size_t i = 0; i < a.routes.size(); ++i) CHECK(a.routes[i].waypoints == b.routes[i].waypoints);
}
