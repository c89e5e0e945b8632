#include "kwatch/kwrp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

#include "kwatch/visibility.hpp"

namespace kwatch {

namespace {

using NodeId = HananGrid::NodeId;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Drops repeated points and interior points of straight runs.
std::vector<Point> simplify(const std::vector<Point>& pts) {
  std::vector<Point> out;
  for (const Point& p : pts) {
    if (!out.empty() && out.back() == p) continue;
    if (out.size() >= 2 && orient(out[out.size() - 2], out.back(), p) == 0.0 &&
        dot(out.back() - out[out.size() - 2], p - out.back()) > 0.0) {
      out.back() = p;
      continue;
    }
    out.push_back(p);
  }
  return out;
}

GeodesicPath assemble_route(const HananGrid& g, const std::vector<NodeId>& contacts) {
  GeodesicPath route;
  route.metric = Metric::kL1;
  std::vector<NodeId> stops{g.s_node()};
  stops.insert(stops.end(), contacts.begin(), contacts.end());
  stops.push_back(g.s_node());
  std::vector<Point> pts{g.node(g.s_node())};
  Length total = 0;
  for (std::size_t i = 1; i < stops.size(); ++i) {
    total += g.distance(stops[i - 1], stops[i]);
    for (NodeId id : g.path(stops[i - 1], stops[i])) pts.push_back(g.node(id));
  }
  route.waypoints = simplify(pts);
  route.length = static_cast<double>(total);
  return route;
}

struct Layered {
  Length length = 0;
  std::vector<NodeId> contacts;
};

// Shortest closed walk from s touching the given cuts in order.
Layered layered_route(const HananGrid& g, const std::vector<std::size_t>& cut_ids) {
  if (cut_ids.empty()) return {};
  std::vector<std::vector<Length>> dp(cut_ids.size());
  std::vector<std::vector<std::int32_t>> from(cut_ids.size());
  for (std::size_t j = 0; j < cut_ids.size(); ++j) {
    const auto& nodes = g.cut_nodes(cut_ids[j]);
    dp[j].assign(nodes.size(), 0);
    from[j].assign(nodes.size(), -1);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      if (j == 0) {
        dp[j][a] = g.distance(g.s_node(), nodes[a]);
        continue;
      }
      const auto& prev = g.cut_nodes(cut_ids[j - 1]);
      Length best = std::numeric_limits<Length>::max();
      for (std::size_t b = 0; b < prev.size(); ++b) {
        const Length d = dp[j - 1][b] + g.distance(prev[b], nodes[a]);
        if (d < best) {
          best = d;
          from[j][a] = static_cast<std::int32_t>(b);
        }
      }
      dp[j][a] = best;
    }
  }
  const std::size_t last = cut_ids.size() - 1;
  const auto& tail = g.cut_nodes(cut_ids[last]);
  Layered out;
  out.length = std::numeric_limits<Length>::max();
  std::int32_t at = -1;
  for (std::size_t a = 0; a < tail.size(); ++a) {
    const Length d = dp[last][a] + g.distance(tail[a], g.s_node());
    if (d < out.length) {
      out.length = d;
      at = static_cast<std::int32_t>(a);
    }
  }
  out.contacts.resize(cut_ids.size());
  for (std::size_t j = cut_ids.size(); j-- > 0;) {
    out.contacts[j] = g.cut_nodes(cut_ids[j])[static_cast<std::size_t>(at)];
    at = from[j][static_cast<std::size_t>(at)];
  }
  return out;
}

Solution zero_solution(const KwrpContext& ctx, int k, SolveMode mode) {
  Solution sol;
  sol.mode = mode;
  for (int i = 0; i < k; ++i) {
    sol.routes.push_back({{ctx.s}, 0.0, Metric::kL1});
    sol.per_route_lengths.push_back(0.0);
    sol.contacts.emplace_back();
  }
  return sol;
}

// ---- the k-watchman table -------------------------------------------------

struct State {
  std::vector<NodeId> nodes;      // canonical order: by (node, len, true_len)
  std::vector<Length> lens;       // table lengths, bucket counts under the FPTAS
  std::vector<Length> true_lens;  // unrounded grid lengths
  std::vector<std::int8_t> from;  // position in the parent state
  std::int32_t parent = -1;
  std::int8_t moved = -1;
};

bool lens_dominate(const State& a, const State& b) {
  for (std::size_t i = 0; i < a.lens.size(); ++i)
    if (a.lens[i] > b.lens[i]) return false;
  return true;
}

struct Table {
  std::vector<State> states;
  std::map<std::vector<NodeId>, std::vector<std::size_t>> by_nodes;

  void offer(State&& st) {
    auto& slot = by_nodes[st.nodes];
    for (std::size_t idx : slot) {
      const State& have = states[idx];
      if (have.moved == -2) continue;
      if (lens_dominate(have, st)) {
        if (have.lens != st.lens || have.true_lens <= st.true_lens) return;
      }
    }
    for (std::size_t idx : slot) {
      State& have = states[idx];
      if (have.moved != -2 && lens_dominate(st, have)) have.moved = -2;
    }
    slot.push_back(states.size());
    states.push_back(std::move(st));
  }

  std::vector<State> take() {
    std::vector<State> out;
    for (State& s : states)
      if (s.moved != -2) out.push_back(std::move(s));
    return out;
  }
};

// Returns the table layers; layer 0 is the start state.
struct DpRun {
  std::vector<std::vector<State>> layers;
  SolveStats stats;
};

DpRun run_table(const KwrpContext& ctx, int k, const std::function<Length(Length)>& scale,
                Length cap, const KwrpOptions& options) {
  const HananGrid& g = ctx.grid;
  const NodeId s = g.s_node();
  DpRun run;
  State start;
  start.nodes.assign(static_cast<std::size_t>(k), s);
  start.lens.assign(static_cast<std::size_t>(k), 0);
  start.true_lens.assign(static_cast<std::size_t>(k), 0);
  start.from.resize(static_cast<std::size_t>(k));
  std::iota(start.from.begin(), start.from.end(), std::int8_t{0});
  run.layers.push_back({start});

  // Children of one parent state, in deterministic order.
  auto expand = [&](const State& p, std::int32_t parent_idx, std::size_t cut,
                    std::vector<State>& out) {
    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (i > 0 && p.nodes[ui] == p.nodes[ui - 1] && p.lens[ui] == p.lens[ui - 1] &&
          p.true_lens[ui] == p.true_lens[ui - 1])
        continue;
      for (const Contact& c : contact_candidates(g, p.nodes[ui], cut)) {
        const Length nl = p.lens[ui] + scale(c.distance);
        if (nl + scale(g.distance(c.node, s)) > cap) continue;
        std::vector<std::tuple<NodeId, Length, Length, std::int8_t>> row;
        for (int w = 0; w < k; ++w) {
          const auto uw = static_cast<std::size_t>(w);
          if (w == i)
            row.emplace_back(c.node, nl, p.true_lens[uw] + c.distance, static_cast<std::int8_t>(w));
          else
            row.emplace_back(p.nodes[uw], p.lens[uw], p.true_lens[uw], static_cast<std::int8_t>(w));
        }
        std::sort(row.begin(), row.end());
        State child;
        child.parent = parent_idx;
        for (std::size_t w = 0; w < row.size(); ++w) {
          const auto& [node, len, tl, origin] = row[w];
          child.nodes.push_back(node);
          child.lens.push_back(len);
          child.true_lens.push_back(tl);
          child.from.push_back(origin);
          if (origin == i) child.moved = static_cast<std::int8_t>(w);
        }
        out.push_back(std::move(child));
      }
    }
  };

  for (std::size_t j = 0; j < ctx.cuts.m(); ++j) {
    const auto& prev = run.layers.back();
    const unsigned workers = std::max(1u, std::min<unsigned>(
                                              options.threads, static_cast<unsigned>(prev.size())));
    std::vector<std::vector<State>> chunks(workers);
    auto work = [&](unsigned w) {
      const std::size_t lo = prev.size() * w / workers, hi = prev.size() * (w + 1) / workers;
      for (std::size_t p = lo; p < hi; ++p)
        expand(prev[p], static_cast<std::int32_t>(p), j, chunks[w]);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    Table next;
    for (auto& chunk : chunks) {
      run.stats.states_generated += chunk.size();
      if (run.stats.states_generated > options.state_budget)
        throw Error(ErrorCode::kInstanceTooLarge, "subproblem budget exceeded");
      for (State& st : chunk) next.offer(std::move(st));
    }
    run.layers.push_back(next.take());
    run.stats.states_kept = std::max(run.stats.states_kept, run.layers.back().size());
  }
  run.stats.layers = run.layers.size() - 1;
  return run;
}

Solution extract(const KwrpContext& ctx, int k, const DpRun& run,
                 const std::function<Length(Length)>& scale, SolveMode mode) {
  const HananGrid& g = ctx.grid;
  const auto& last = run.layers.back();
  if (last.empty()) throw Error(ErrorCode::kInstanceTooLarge, "no feasible table state");

  struct Rank {
    Length table_max;
    Length true_max;
    std::vector<Length> closed;
    std::vector<NodeId> nodes;
    auto operator<=>(const Rank&) const = default;
  };
  std::optional<Rank> best;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < last.size(); ++i) {
    const State& st = last[i];
    Rank r{0, 0, {}, st.nodes};
    for (int w = 0; w < k; ++w) {
      const auto uw = static_cast<std::size_t>(w);
      const Length back = g.distance(st.nodes[uw], g.s_node());
      r.table_max = std::max(r.table_max, st.lens[uw] + scale(back));
      r.closed.push_back(st.true_lens[uw] + back);
    }
    std::sort(r.closed.begin(), r.closed.end());
    r.true_max = r.closed.back();
    if (!best || r < *best) {
      best = r;
      best_idx = i;
    }
  }

  // Walk the back-pointers, following each watchman through the reorderings.
  std::vector<std::vector<NodeId>> contacts(static_cast<std::size_t>(k));
  std::vector<std::int8_t> pos(static_cast<std::size_t>(k));
  std::iota(pos.begin(), pos.end(), std::int8_t{0});
  std::size_t idx = best_idx;
  for (std::size_t layer = run.layers.size() - 1; layer > 0; --layer) {
    const State& st = run.layers[layer][idx];
    for (int w = 0; w < k; ++w) {
      auto& p = pos[static_cast<std::size_t>(w)];
      if (p == st.moved) contacts[static_cast<std::size_t>(w)].push_back(st.nodes[static_cast<std::size_t>(p)]);
      p = st.from[static_cast<std::size_t>(p)];
    }
    idx = static_cast<std::size_t>(st.parent);
  }

  Solution sol;
  sol.mode = mode;
  sol.stats = run.stats;
  for (int w = 0; w < k; ++w) {
    auto& c = contacts[static_cast<std::size_t>(w)];
    std::reverse(c.begin(), c.end());
    sol.routes.push_back(assemble_route(g, c));
    sol.per_route_lengths.push_back(sol.routes.back().length);
    std::vector<Point> pts;
    for (NodeId id : c) pts.push_back(g.node(id));
    sol.contacts.push_back(std::move(pts));
  }
  sol.max_length = *std::max_element(sol.per_route_lengths.begin(), sol.per_route_lengths.end());
  return sol;
}

void check_k(int k) {
  if (k < 1) throw Error(ErrorCode::kSchemaError, "k must be at least 1");
  if (k > 100) throw Error(ErrorCode::kInstanceTooLarge, "k too large");
}

}  // namespace

const char* to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::kExact: return "exact";
    case SolveMode::kFptas: return "fptas";
    case SolveMode::kL2: return "l2";
    case SolveMode::kOracle: return "oracle";
    case SolveMode::kQuota: return "quota";
  }
  return "?";
}

KwrpContext make_context(const Polygon& poly, Point s, const GridOptions& grid_options) {
  return make_context(poly, s, compute_essential_cuts(poly, s), grid_options);
}

KwrpContext make_context(const Polygon& poly, Point s, EssentialCutList cuts,
                         const GridOptions& grid_options) {
  if (!poly.orthogonal() || !poly.integral())
    throw Error(ErrorCode::kNotOrthogonal, "grid solvers need an orthogonal integer polygon");
  HananGrid grid = build_hanan_grid(poly, s, cuts, grid_options);
  return {poly, s, std::move(cuts), std::move(grid)};
}

SingleRoute single_route_opt(const KwrpContext& ctx) {
  std::vector<std::size_t> all(ctx.cuts.m());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const Layered r = layered_route(ctx.grid, all);
  SingleRoute out;
  out.length = r.length;
  out.route = assemble_route(ctx.grid, r.contacts);
  for (NodeId id : r.contacts) out.contacts.push_back(ctx.grid.node(id));
  return out;
}

Solution exact_dp(const KwrpContext& ctx, int k, const KwrpOptions& options) {
  check_k(k);
  const auto t0 = Clock::now();
  if (ctx.cuts.m() == 0) return zero_solution(ctx, k, SolveMode::kExact);
  const Length cap = single_route_opt(ctx).length;
  const auto identity = [](Length d) { return d; };
  const DpRun run = run_table(ctx, k, identity, cap, options);
  Solution sol = extract(ctx, k, run, identity, SolveMode::kExact);
  sol.stats.seconds = seconds_since(t0);
  return sol;
}

Solution fptas(const KwrpContext& ctx, int k, double epsilon, const KwrpOptions& options) {
  check_k(k);
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kSchemaError, "epsilon must be positive");
  const auto t0 = Clock::now();
  const Length L = single_route_opt(ctx).length;
  if (ctx.cuts.m() == 0 || L == 0) {
    Solution z = zero_solution(ctx, k, SolveMode::kFptas);
    z.mode = SolveMode::kFptas;
    return z;
  }
  const double raw = std::ceil(static_cast<double>(ctx.poly.size()) * k / epsilon);
  if (raw > 1e12) throw Error(ErrorCode::kInstanceTooLarge, "epsilon too small");
  const auto intervals = static_cast<Length>(raw);
  // Round each leg down to a whole number of intervals of width L / intervals.
  const auto bucket = [L, intervals](Length d) {
    return static_cast<Length>(static_cast<__int128>(d) * intervals / L);
  };
  const DpRun run = run_table(ctx, k, bucket, intervals, options);
  Solution sol = extract(ctx, k, run, bucket, SolveMode::kFptas);
  sol.stats.seconds = seconds_since(t0);
  return sol;
}

Solution l2_wrapper(const KwrpContext& ctx, int k, double epsilon, const KwrpOptions& options) {
  const auto t0 = Clock::now();
  Solution base = fptas(ctx, k, epsilon, options);
  const GeodesicRouter router(ctx.poly, Metric::kL2);
  Solution sol = base;
  sol.mode = SolveMode::kL2;
  sol.metric = Metric::kL2;
  sol.l1_lengths = base.per_route_lengths;
  sol.l1_max_length = base.max_length;
  sol.routes.clear();
  sol.per_route_lengths.clear();
  for (const auto& stops : base.contacts) {
    std::vector<Point> seq{ctx.s};
    seq.insert(seq.end(), stops.begin(), stops.end());
    seq.push_back(ctx.s);
    std::vector<Point> pts{ctx.s};
    for (std::size_t i = 1; i < seq.size(); ++i) {
      const GeodesicPath leg = router.path(seq[i - 1], seq[i]);
      pts.insert(pts.end(), leg.waypoints.begin() + 1, leg.waypoints.end());
    }
    GeodesicPath route{simplify(pts), 0.0, Metric::kL2};
    route.length = path_length(route.waypoints, Metric::kL2);
    sol.per_route_lengths.push_back(route.length);
    sol.routes.push_back(std::move(route));
  }
  sol.max_length = *std::max_element(sol.per_route_lengths.begin(), sol.per_route_lengths.end());
  sol.stats.seconds = seconds_since(t0);
  return sol;
}

Solution brute_force_oracle(const KwrpContext& ctx, int k) {
  check_k(k);
  const std::size_t m = ctx.cuts.m();
  if (m > 8 || k > 3) throw Error(ErrorCode::kInstanceTooLarge, "oracle limited to m <= 8, k <= 3");
  const auto t0 = Clock::now();
  if (m == 0) return zero_solution(ctx, k, SolveMode::kOracle);

  const std::size_t subsets = std::size_t{1} << m;
  std::vector<Layered> per_subset(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<std::size_t> ids;
    for (std::size_t j = 0; j < m; ++j)
      if (mask >> j & 1u) ids.push_back(j);
    per_subset[mask] = layered_route(ctx.grid, ids);
  }

  std::size_t assignments = 1;
  for (std::size_t j = 0; j < m; ++j) assignments *= static_cast<std::size_t>(k);
  std::vector<Length> best_lengths;
  std::vector<std::size_t> best_masks;
  for (std::size_t code = 0; code < assignments; ++code) {
    std::vector<std::size_t> masks(static_cast<std::size_t>(k), 0);
    std::size_t c = code;
    for (std::size_t j = 0; j < m; ++j, c /= static_cast<std::size_t>(k))
      masks[c % static_cast<std::size_t>(k)] |= std::size_t{1} << j;
    std::vector<Length> lengths;
    for (std::size_t mask : masks) lengths.push_back(per_subset[mask].length);
    std::vector<Length> key = lengths;
    std::sort(key.rbegin(), key.rend());
    if (best_masks.empty() || key < best_lengths) {
      best_lengths = key;
      best_masks = masks;
    }
  }

  Solution sol;
  sol.mode = SolveMode::kOracle;
  for (std::size_t mask : best_masks) {
    const Layered& r = per_subset[mask];
    sol.routes.push_back(assemble_route(ctx.grid, r.contacts));
    sol.per_route_lengths.push_back(sol.routes.back().length);
    std::vector<Point> pts;
    for (NodeId id : r.contacts) pts.push_back(ctx.grid.node(id));
    sol.contacts.push_back(std::move(pts));
  }
  sol.max_length = *std::max_element(sol.per_route_lengths.begin(), sol.per_route_lengths.end());
  sol.stats.states_generated = subsets + assignments;
  sol.stats.seconds = seconds_since(t0);
  return sol;
}

CoverReport verify_cover(const Polygon& poly, const EssentialCutList& cuts,
                         const std::vector<GeodesicPath>& routes, const CoverOptions& options) {
  CoverReport report;
  std::vector<Segment> pieces;
  for (const GeodesicPath& r : routes) {
    if (r.waypoints.size() == 1) pieces.push_back({r.waypoints[0], r.waypoints[0]});
    for (std::size_t i = 1; i < r.waypoints.size(); ++i)
      pieces.push_back({r.waypoints[i - 1], r.waypoints[i]});
  }
  for (std::size_t j = 0; j < cuts.m(); ++j) {
    const Segment chord = cuts.cuts[j].chord();
    const bool hit = std::any_of(pieces.begin(), pieces.end(), [&](const Segment& p) {
      return segments_intersect_exact(p, chord);
    });
    if (!hit) report.unvisited_cuts.push_back(j);
  }

  double minx = poly[0].x, maxx = minx, miny = poly[0].y, maxy = miny;
  for (const Point& p : poly.vertices()) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  std::vector<Point> samples = options.extra_samples;
  const int n = std::max(1, options.samples_per_axis);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      samples.push_back({minx + (maxx - minx) * (i + 0.5) / n, miny + (maxy - miny) * (j + 0.5) / n});

  const double tol = 1e-7 * std::max(1.0, poly.diameter());
  for (const Point& x : samples) {
    if (locate(poly, x) == Location::kOutside) continue;
    ++report.samples_checked;
    bool seen = false;
    for (const GeodesicPath& r : routes) {
      for (const Point& w : r.waypoints) {
        if (point_sees_point(poly, x, w)) {
          seen = true;
          break;
        }
      }
      if (seen) break;
    }
    if (!seen) {
      const Ring vis = visibility_polygon(poly, x).boundary;
      for (const Segment& p : pieces) {
        if (ring_contains(vis, p.a) || ring_contains(vis, p.b)) {
          seen = true;
          break;
        }
        for (std::size_t e = 0; e < vis.size() && !seen; ++e)
          seen = segments_intersect(p, {vis[e], vis[(e + 1) % vis.size()]}, tol);
        if (seen) break;
      }
    }
    if (!seen) report.invisible_samples.push_back(x);
  }
  report.pass = report.unvisited_cuts.empty() && report.invisible_samples.empty();
  return report;
}

}  // namespace kwatch
