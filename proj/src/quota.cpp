#include "kwatch/quota.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "kwatch/kernels.hpp"

namespace kwatch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ring_perimeter(const Ring& ring) {
  double total = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) total += l2(ring[i], ring[(i + 1) % ring.size()]);
  return total;
}

Ring circle(Point c, double rho) {
  Ring out = sample_arc({c, rho, 0.0, kTwoPi});
  out.pop_back();
  return out;
}

// Lattice rounding can leave a union vertex a hair outside P.
Point snap_into(const Polygon& poly, Point p) {
  if (contains(poly, p)) return p;
  double best = std::numeric_limits<double>::infinity();
  Point out = p;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const Point d = e.b - e.a;
    const double t = std::clamp(dot(p - e.a, d) / dot(d, d), 0.0, 1.0);
    const Point q = e.a + d * t;
    if (l2(p, q) < best) {
      best = l2(p, q);
      out = q;
    }
  }
  return out;
}

bool on_polygon_boundary(const Polygon& poly, Point p, double tol) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (point_segment_distance(p, poly.edge(i)) <= tol) return true;
  return false;
}

GeodesicDisk build_disk(const Polygon& poly, Point s, double r,
                        const std::vector<Point>& reflex, const std::vector<double>& reflex_dist) {
  GeodesicDisk disk;
  disk.center = s;
  disk.radius = r;
  if (r <= 0.0) return disk;
  std::vector<std::pair<Point, double>> apexes{{s, 0.0}};
  for (std::size_t i = 0; i < reflex.size(); ++i)
    if (reflex_dist[i] < r) apexes.emplace_back(reflex[i], reflex_dist[i]);

  std::vector<Ring> pieces;
  const double tol = 1e-9 * std::max(1.0, poly.diameter());
  for (const auto& [u, du] : apexes) {
    const double rho = r - du;
    if (rho <= tol) continue;
    const Ring vis = visibility_polygon(poly, u).boundary;
    const Ring disc = circle(u, rho);
    for (Ring& piece : intersect_rings(std::span(&vis, 1), std::span(&disc, 1), poly.diameter()))
      pieces.push_back(std::move(piece));
    disk.arcs.push_back({u, rho, 0.0, kTwoPi});
  }
  for (Ring& ring : union_rings(pieces, poly.diameter())) {
    disk.area += signed_area(ring);
    disk.perimeter += ring_perimeter(ring);
    disk.rings.push_back(std::move(ring));
  }
  return disk;
}

bool cell_overlaps(const std::vector<Ring>& rings, double x0, double y0, double x1, double y1) {
  const Point corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  for (const Ring& ring : rings) {
    if (signed_area(ring) <= 0.0) continue;
    if (ring_contains(ring, {(x0 + x1) / 2, (y0 + y1) / 2})) return true;
    for (const Point& c : corners)
      if (ring_contains(ring, c)) return true;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point a = ring[i];
      if (a.x >= x0 && a.x <= x1 && a.y >= y0 && a.y <= y1) return true;
      const Segment e{a, ring[(i + 1) % ring.size()]};
      for (int c = 0; c < 4; ++c)
        if (segments_intersect_exact(e, {corners[c], corners[(c + 1) % 4]})) return true;
    }
  }
  return false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GeodesicPath join_stops(const GeodesicRouter& router, const std::vector<Point>& stops) {
  GeodesicPath out;
  out.metric = Metric::kL2;
  out.waypoints.push_back(stops.front());
  for (std::size_t i = 1; i < stops.size(); ++i) {
    const GeodesicPath leg = router.path(stops[i - 1], stops[i]);
    for (std::size_t w = 1; w < leg.waypoints.size(); ++w) {
      if (!(leg.waypoints[w] == out.waypoints.back())) out.waypoints.push_back(leg.waypoints[w]);
    }
  }
  out.length = path_length(out.waypoints, Metric::kL2);
  return out;
}

}  // namespace

const char* to_string(FactorMode mode) {
  return mode == FactorMode::kDouble ? "double" : "oneplus";
}

double epsilon_prime(FactorMode mode, double epsilon) {
  return mode == FactorMode::kDouble ? 4.0 * epsilon + epsilon * epsilon
                                     : 4.0 * epsilon + 2.0 * epsilon * epsilon;
}

double approximation_factor(FactorMode mode, double epsilon) {
  return (mode == FactorMode::kDouble ? 3.0 : 2.0) + epsilon_prime(mode, epsilon);
}

QuotaContext::QuotaContext(const Polygon& poly, Point s, QuotaOptions options)
    : poly_(poly), s_(s), options_(options), router_(poly, Metric::kL2) {
  if (locate(poly_, s_) != Location::kBoundary)
    throw Error(ErrorCode::kStartNotOnBoundary, "start point is not on the boundary");
  area_ = kwatch::polygon_area(poly_);
  start_visible_ = signed_area(visibility_polygon(poly_, s_).boundary);
  start_reflex_ = router_.reflex_distances(s_);
  for (const Point& v : poly_.vertices()) radius_ = std::max(radius_, distance_from_start(v));

  double minx = poly_[0].x, maxx = minx, miny = poly_[0].y, maxy = miny;
  for (const Point& p : poly_.vertices()) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double box = (maxx - minx) * (maxy - miny);
  const auto per_axis = static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(options_.sample_target) * box / area_)));
  std::mt19937 rng(options_.seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  const double w = (maxx - minx) / per_axis, h = (maxy - miny) / per_axis;
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      const double x = minx + (i + jitter(rng)) * w;
      const double y = miny + (j + jitter(rng)) * h;
      if (locate(poly_, {x, y}) != Location::kInside) continue;
      xs_.push_back(x);
      ys_.push_back(y);
    }
  }
}

double QuotaContext::distance_from_start(Point p) const {
  p = snap_into(poly_, p);
  if (point_sees_point(poly_, s_, p)) return l2(s_, p);
  double best = std::numeric_limits<double>::infinity();
  const auto& reflex = router_.reflex_points();
  for (std::size_t i = 0; i < reflex.size(); ++i) {
    if (start_reflex_[i] + l2(p, reflex[i]) >= best) continue;
    if (point_sees_point(poly_, p, reflex[i])) best = start_reflex_[i] + l2(p, reflex[i]);
  }
  return best;
}

std::vector<std::uint64_t> QuotaContext::visible_samples(Point p) const {
  std::vector<std::uint64_t> bits(kernels::words_for(xs_.size()));
  const Ring vis = visibility_polygon(poly_, p).boundary;
  kernels::points_in_ring(xs_, ys_, vis, bits);
  return bits;
}

GeodesicDisk geodesic_disk(const Polygon& poly, Point s, double r) {
  const GeodesicRouter router(poly, Metric::kL2);
  return build_disk(poly, s, r, router.reflex_points(), router.reflex_distances(s));
}

GeodesicDisk geodesic_disk(const QuotaContext& ctx, double r) {
  const auto& router = ctx.router();
  return build_disk(ctx.polygon(), ctx.start(), r, router.reflex_points(),
                    router.reflex_distances(ctx.start()));
}

double disk_visible_area(const QuotaContext& ctx, const GeodesicDisk& disk) {
  const Polygon& poly = ctx.polygon();
  if (disk.rings.empty()) return ctx.start_visible_area();
  const double tol = 1e-7 * std::max(1.0, poly.diameter());
  std::vector<Point> witnesses{ctx.start()};
  std::vector<Ring> outer;
  for (const Ring& ring : disk.rings) {
    if (signed_area(ring) <= 0.0) continue;
    outer.push_back(ring);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point a = snap_into(poly, ring[i]);
      const Point b = snap_into(poly, ring[(i + 1) % ring.size()]);
      witnesses.push_back(a);
      // Pieces of the polygon boundary need the full segment treatment;
      // arc chords are short enough for their endpoints.
      if (on_polygon_boundary(poly, a, tol) && on_polygon_boundary(poly, b, tol) &&
          on_polygon_boundary(poly, (a + b) * 0.5, tol) && l2(a, b) > tol) {
        const auto w = segment_witnesses(poly, {a, b});
        witnesses.insert(witnesses.end(), w.begin(), w.end());
      }
    }
  }
  // Most witnesses along an arc see the same region; only those that reach a
  // new sample go into the exact union.
  std::vector<std::uint64_t> seen(kernels::words_for(ctx.sample_count()));
  std::vector<std::uint64_t> bits(seen.size());
  std::vector<Ring> rings = outer;
  for (Point w : witnesses) {
    w = snap_into(poly, w);
    Ring vis = visibility_polygon(poly, w).boundary;
    std::fill(bits.begin(), bits.end(), 0);
    kernels::points_in_ring(ctx.sample_x(), ctx.sample_y(), vis, bits);
    if (kernels::union_popcount(seen, bits) == kernels::popcount(seen)) continue;
    kernels::or_into(seen, bits);
    rings.push_back(std::move(vis));
  }
  return std::min(ctx.polygon_area(), union_area(rings, poly.diameter()));
}

RminResult rmin_search(const QuotaContext& ctx, double A) {
  if (A > ctx.polygon_area() * (1.0 + 1e-9))
    throw Error(ErrorCode::kQuotaExceedsArea, "quota exceeds polygon area");
  RminResult out;
  const double threshold = A * (1.0 - ctx.options().area_tolerance);
  if (ctx.start_visible_area() >= threshold) return out;
  double lo = 0.0, hi = ctx.geodesic_radius();
  while (hi - lo > ctx.options().radius_tolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    GeodesicDisk disk = geodesic_disk(ctx, mid);
    const bool enough = disk_visible_area(ctx, disk) >= threshold;
    out.disks.push_back(std::move(disk));
    ++out.iterations;
    (enough ? hi : lo) = mid;
  }
  out.r_min = hi;
  return out;
}

BudgetRoute budget_route(const QuotaContext& ctx, const GeodesicDisk& disk, double B,
                         double epsilon, double A) {
  (void)A;
  const Polygon& poly = ctx.polygon();
  const Point s = ctx.start();
  const auto& opt = ctx.options();
  BudgetRoute out;
  out.budget = B;
  out.route = {{s}, 0.0, Metric::kL2};
  const double r = disk.radius;
  if (B <= 0.0 || r <= 0.0 || disk.rings.empty()) {
    out.area = ctx.start_visible_area();
    return out;
  }

  // S_{delta,r}: vertices of grid cells (anchored at s, inside the B x B
  // square around s) that meet C_g(r), kept when inside P and within
  // geodesic distance r(1 + eps).
  double minx = std::numeric_limits<double>::infinity(), maxx = -minx, miny = minx, maxy = -minx;
  for (const Ring& ring : disk.rings) {
    for (const Point& p : ring) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  minx = std::max(minx, s.x - B / 2);
  maxx = std::min(maxx, s.x + B / 2);
  miny = std::max(miny, s.y - B / 2);
  maxy = std::min(maxy, s.y + B / 2);
  double delta = std::max(epsilon * std::min(B, r) / (4.0 * static_cast<double>(poly.size())),
                          1e-9 * std::max(1.0, poly.diameter()));
  const double reach = r * (1.0 + epsilon) + 1e-9 * std::max(1.0, poly.diameter());
  std::vector<Point> cand;
  for (;;) {
    cand.clear();
    const auto i0 = static_cast<long long>(std::floor((minx - s.x) / delta));
    const auto i1 = static_cast<long long>(std::ceil((maxx - s.x) / delta));
    const auto j0 = static_cast<long long>(std::floor((miny - s.y) / delta));
    const auto j1 = static_cast<long long>(std::ceil((maxy - s.y) / delta));
    const double estimate = static_cast<double>(i1 - i0 + 1) * static_cast<double>(j1 - j0 + 1);
    if (estimate > 64.0 * static_cast<double>(opt.candidate_cap)) {
      delta *= 1.25;
      continue;
    }
    std::set<std::pair<long long, long long>> verts;
    for (long long i = i0; i < i1; ++i) {
      for (long long j = j0; j < j1; ++j) {
        const double x0 = s.x + i * delta, y0 = s.y + j * delta;
        if (!cell_overlaps(disk.rings, x0, y0, x0 + delta, y0 + delta)) continue;
        for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) verts.insert({i + di, j + dj});
      }
    }
    for (auto [i, j] : verts) {
      if (i == 0 && j == 0) continue;
      const Point p{s.x + i * delta, s.y + j * delta};
      if (!contains(poly, p)) continue;
      if (ctx.distance_from_start(p) > reach) continue;
      cand.push_back(p);
    }
    if (cand.size() <= opt.candidate_cap) break;
    delta *= 1.25;
  }
  out.delta = delta;
  out.candidates = cand.size();

  const std::size_t words = kernels::words_for(ctx.sample_count());
  std::vector<std::vector<std::uint64_t>> bits;
  bits.reserve(cand.size());
  for (const Point& p : cand) bits.push_back(ctx.visible_samples(p));
  const std::vector<std::uint64_t> start_bits = ctx.visible_samples(s);

  // Geodesic distances between stops; index -1 is s.
  std::map<std::pair<int, int>, double> dist_cache;
  auto dist = [&](int a, int b) {
    if (a == b) return 0.0;
    if (a > b) std::swap(a, b);
    const auto [it, fresh] = dist_cache.try_emplace({a, b}, 0.0);
    if (fresh) it->second = ctx.router().distance(a < 0 ? s : cand[a], cand[b]);
    return it->second;
  };

  struct Tour {
    std::vector<int> stops;  // candidate indices in visiting order
    double length = 0.0;
    std::vector<std::uint64_t> seen;
    std::size_t count = 0;
  };
  const double cap = (1.0 + epsilon) * B;
  Tour best{{}, 0.0, start_bits, kernels::popcount(start_bits)};
  std::vector<Tour> beam{best};
  const std::size_t all = ctx.sample_count();
  constexpr std::size_t kShortlist = 48;

  for (int depth = 0; depth < opt.max_tour_vertices && best.count < all; ++depth) {
    struct Move {
      std::size_t count;
      double length;
      std::size_t tour;
      int cand;
      std::size_t pos;
    };
    std::vector<Move> moves;
    for (std::size_t t = 0; t < beam.size(); ++t) {
      const Tour& tour = beam[t];
      std::vector<std::pair<std::size_t, int>> gains;
      for (int c = 0; c < static_cast<int>(cand.size()); ++c) {
        if (std::find(tour.stops.begin(), tour.stops.end(), c) != tour.stops.end()) continue;
        const std::size_t n = kernels::union_popcount(tour.seen, bits[static_cast<std::size_t>(c)]);
        if (n > tour.count) gains.emplace_back(n, c);
      }
      std::sort(gains.begin(), gains.end(),
                [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
      std::size_t tried = 0;
      for (const auto& [n, c] : gains) {
        if (tried == kShortlist) break;
        // Cheapest insertion between consecutive stops of the closed tour.
        double add = std::numeric_limits<double>::infinity();
        std::size_t at = 0;
        for (std::size_t p = 0; p <= tour.stops.size(); ++p) {
          const int a = p == 0 ? -1 : tour.stops[p - 1];
          const int b = p == tour.stops.size() ? -1 : tour.stops[p];
          const double d = dist(a, c) + dist(c, b) - dist(a, b);
          if (d < add) {
            add = d;
            at = p;
          }
        }
        if (tour.length + add > cap) continue;
        ++tried;
        moves.push_back({n, tour.length + add, t, c, at});
      }
    }
    if (moves.empty()) break;
    std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
      if (a.count != b.count) return a.count > b.count;
      if (a.length != b.length) return a.length < b.length;
      if (a.tour != b.tour) return a.tour < b.tour;
      return a.cand < b.cand;
    });
    std::vector<Tour> next;
    std::set<std::vector<int>> members;
    for (const Move& m : moves) {
      if (static_cast<int>(next.size()) == opt.beam_width) break;
      Tour t = beam[m.tour];
      t.stops.insert(t.stops.begin() + static_cast<std::ptrdiff_t>(m.pos), m.cand);
      std::vector<int> key = t.stops;
      std::sort(key.begin(), key.end());
      if (!members.insert(key).second) continue;
      t.length = m.length;
      kernels::or_into(t.seen, bits[static_cast<std::size_t>(m.cand)]);
      t.count = m.count;
      next.push_back(std::move(t));
    }
    for (const Tour& t : next) {
      if (t.count > best.count || (t.count == best.count && t.length < best.length)) best = t;
    }
    beam = std::move(next);
  }
  (void)words;

  std::vector<Point> stops{s};
  for (int c : best.stops) {
    stops.push_back(cand[static_cast<std::size_t>(c)]);
    out.tour.push_back(cand[static_cast<std::size_t>(c)]);
  }
  stops.push_back(s);
  out.route = best.stops.empty() ? GeodesicPath{{s}, 0.0, Metric::kL2} : join_stops(ctx.router(), stops);
  out.area = best.stops.empty() ? ctx.start_visible_area()
                                : route_visible_area(poly, std::span(&out.route, 1));
  return out;
}

BudgetSearch budget_binary_search(const QuotaContext& ctx, const GeodesicDisk& disk,
                                  double r_min, double epsilon, double A) {
  const double n = static_cast<double>(ctx.polygon().size());
  const double threshold = A * (1.0 - ctx.options().area_tolerance);
  const auto steps = static_cast<long long>(std::ceil(9.0 * n / epsilon));
  const double width = 9.0 * n * r_min / static_cast<double>(steps);
  BudgetSearch out;
  std::map<long long, BudgetRoute> probes;
  auto probe = [&](long long i) -> const BudgetRoute& {
    auto it = probes.find(i);
    if (it == probes.end()) {
      it = probes.emplace(i, budget_route(ctx, disk, static_cast<double>(i) * width, epsilon, A)).first;
      ++out.probes;
    }
    return it->second;
  };
  auto ok = [&](long long i) { return probe(i).area >= threshold; };

  if (!ok(steps)) throw Error(ErrorCode::kBudgetInfeasible, "largest budget misses the quota");
  long long lo = -1, hi = steps;  // ok(hi) holds; lo is the last known miss
  if (ok(0)) {
    hi = 0;
  } else {
    lo = 0;
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
  }

  // Every probe below the answer must miss and every probe above must hit.
  std::vector<long long> audit;
  if (ctx.options().verify_monotone) {
    for (long long i = 0; i <= steps; ++i) audit.push_back(i);
  } else {
    for (long long i = std::max(0LL, hi - 3); i < hi; ++i) audit.push_back(i);
  }
  for (long long i : audit) {
    if (ok(i) != (i >= hi)) out.monotone = false;
  }
  for (const auto& [i, route] : probes) {
    if ((route.area >= threshold) != (i >= hi)) out.monotone = false;
  }
  if (!out.monotone) {
    for (long long i = 0; i <= steps; ++i) {
      if (ok(i)) {
        hi = i;
        break;
      }
    }
  }
  out.budget = static_cast<double>(hi) * width;
  out.best = probe(hi);
  return out;
}

std::vector<GeodesicPath> split_route(const GeodesicRouter& router, const GeodesicPath& gamma,
                                      int k) {
  const auto& w = gamma.waypoints;
  const Point s = w.front();
  const double total = path_length(w, Metric::kL2);
  std::vector<GeodesicPath> out;
  if (total <= 0.0 || w.size() < 2) {
    for (int i = 0; i < k; ++i) out.push_back({{s}, 0.0, Metric::kL2});
    return out;
  }
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < w.size(); ++i) cum.push_back(cum.back() + l2(w[i - 1], w[i]));

  // Point at arclength t, and the index of the first waypoint strictly after it.
  auto locate_at = [&](double t) -> std::pair<Point, std::size_t> {
    if (t <= 0.0) return {w.front(), 1};
    if (t >= total) return {w.back(), w.size()};
    const auto it = std::upper_bound(cum.begin(), cum.end(), t);
    const auto seg = static_cast<std::size_t>(std::distance(cum.begin(), it));
    const double len = cum[seg] - cum[seg - 1];
    const Point p = len > 0.0 ? w[seg - 1] + (w[seg] - w[seg - 1]) * ((t - cum[seg - 1]) / len)
                              : w[seg];
    return {p, seg};
  };

  for (int i = 0; i < k; ++i) {
    const auto [a, after_a] = locate_at(total * i / k);
    const auto [b, after_b] = locate_at(total * (i + 1) / k);
    std::vector<Point> pts = router.path(s, a).waypoints;
    for (std::size_t j = after_a; j < after_b && j < w.size(); ++j)
      if (!(w[j] == pts.back())) pts.push_back(w[j]);
    if (!(b == pts.back())) pts.push_back(b);
    const GeodesicPath home = router.path(b, s);
    for (std::size_t j = 1; j < home.waypoints.size(); ++j)
      if (!(home.waypoints[j] == pts.back())) pts.push_back(home.waypoints[j]);
    GeodesicPath route{pts, 0.0, Metric::kL2};
    route.length = path_length(route.waypoints, Metric::kL2);
    out.push_back(std::move(route));
  }
  return out;
}

QuotaSolution solve_quota(const QuotaContext& ctx, int k, double A, double epsilon,
                          FactorMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  if (k < 1) throw Error(ErrorCode::kSchemaError, "k must be at least 1");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kSchemaError, "epsilon must be positive");
  if (A > ctx.polygon_area() * (1.0 + 1e-9))
    throw Error(ErrorCode::kQuotaExceedsArea, "quota exceeds polygon area");
  const Point s = ctx.start();
  QuotaSolution sol;
  sol.factor_mode = mode;
  sol.epsilon = epsilon;
  sol.target_area = A;
  const double threshold = A * (1.0 - ctx.options().area_tolerance);

  if (ctx.start_visible_area() >= threshold) {
    for (int i = 0; i < k; ++i) {
      sol.routes.push_back({{s}, 0.0, Metric::kL2});
      sol.per_route_lengths.push_back(0.0);
    }
    sol.gamma = {{s}, 0.0, Metric::kL2};
    sol.achieved_area = ctx.start_visible_area();
    sol.seconds = seconds_since(t0);
    return sol;
  }

  RminResult rmin = rmin_search(ctx, A);
  sol.r_min = rmin.r_min;
  sol.rmin_disks = std::move(rmin.disks);
  const double n = static_cast<double>(ctx.polygon().size());
  const double limit = 9.0 * n * sol.r_min;
  const double factor = mode == FactorMode::kDouble ? 2.0 : 1.0 + epsilon;

  bool found = false;
  for (double r = sol.r_min; r <= limit * (1.0 + 1e-12); r *= factor) {
    QuotaIteration it;
    it.r = r;
    GeodesicDisk disk = geodesic_disk(ctx, r);
    it.disk_area = disk.area;
    it.disk_perimeter = disk.perimeter;
    try {
      const BudgetSearch search = budget_binary_search(ctx, disk, sol.r_min, epsilon, A);
      it.feasible = true;
      it.budget = search.budget;
      it.gamma_length = search.best.route.length;
      auto routes = split_route(ctx.router(), search.best.route, k);
      for (const auto& route : routes) it.max_length = std::max(it.max_length, route.length);
      if (!found || it.max_length < sol.max_length) {
        found = true;
        sol.routes = std::move(routes);
        sol.max_length = it.max_length;
        sol.r_final = r;
        sol.budget_used = search.budget;
        sol.gamma = search.best.route;
        sol.gamma_length = search.best.route.length;
        sol.disk = disk;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetInfeasible) throw;
    }
    sol.iterations.push_back(it);
    // Past the geodesic radius every larger disk is all of P.
    if (r >= ctx.geodesic_radius()) break;
  }
  if (!found) throw Error(ErrorCode::kBudgetInfeasible, "no budget reached the quota");
  sol.per_route_lengths.clear();
  for (const auto& route : sol.routes) sol.per_route_lengths.push_back(route.length);
  sol.achieved_area = route_visible_area(ctx.polygon(), sol.routes);
  sol.seconds = seconds_since(t0);
  return sol;
}

}  // namespace kwatch
