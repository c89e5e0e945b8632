#include "kwatch/cuts_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <thread>

namespace kwatch {

namespace {

constexpr Length kUnreached = std::numeric_limits<Length>::max() / 4;

// Arclength coordinates along the boundary, origin at s, counterclockwise.
class BoundaryFrame {
 public:
  BoundaryFrame(const Polygon& poly, Point s) : poly_(poly) {
    cum_.resize(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Segment e = poly.edge(i);
      cum_[i + 1] = cum_[i] + l2(e.a, e.b);
    }
    const auto origin = absolute(s);
    if (!origin) throw Error(ErrorCode::kStartNotOnBoundary, "start point is not on the boundary");
    origin_ = *origin;
  }

  double perimeter() const { return cum_.back(); }

  std::optional<double> position(Point p) const {
    const auto a = absolute(p);
    if (!a) return std::nullopt;
    double t = *a - origin_;
    if (t < 0.0) t += perimeter();
    if (t >= perimeter() - poly_.tolerance()) t = 0.0;
    return t;
  }

  // Boundary chain strictly between positions a < b, endpoints included.
  Ring chain(double a, double b) const {
    std::vector<std::pair<double, Point>> pts;
    for (std::size_t i = 0; i < poly_.size(); ++i) {
      const double t = *position(poly_[i]);
      if (t > a + poly_.tolerance() && t < b - poly_.tolerance()) pts.emplace_back(t, poly_[i]);
    }
    std::sort(pts.begin(), pts.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    Ring out{point_at(a)};
    for (const auto& [t, p] : pts) out.push_back(p);
    out.push_back(point_at(b));
    return out;
  }

  Point point_at(double t) const {
    double abs_t = std::fmod(t + origin_, perimeter());
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), abs_t);
    std::size_t i = static_cast<std::size_t>(std::distance(cum_.begin(), it)) - 1;
    i = std::min(i, poly_.size() - 1);
    const Segment e = poly_.edge(i);
    const double len = cum_[i + 1] - cum_[i];
    return e.a + (e.b - e.a) * ((abs_t - cum_[i]) / len);
  }

 private:
  std::optional<double> absolute(Point p) const {
    for (std::size_t i = 0; i < poly_.size(); ++i) {
      const Segment e = poly_.edge(i);
      if (point_segment_distance(p, e) <= poly_.tolerance()) return cum_[i] + l2(e.a, p);
    }
    return std::nullopt;
  }

  const Polygon& poly_;
  std::vector<double> cum_;
  double origin_ = 0.0;
};

using Key = std::pair<long long, long long>;
Key key_of(Point p) { return {std::llround(p.x), std::llround(p.y)}; }

bool on_segment(Point p, const Segment& s, double tol) { return point_segment_distance(p, s) <= tol; }

}  // namespace

bool Cut::contains(Point p) const { return on_segment(p, chord(), 1e-9); }

double boundary_position(const Polygon& poly, Point s, Point p) {
  const BoundaryFrame frame(poly, s);
  const auto t = frame.position(p);
  if (!t) throw Error(ErrorCode::kPointOutsidePolygon, "point is not on the boundary");
  return *t;
}

Point cast_axis_ray(const Polygon& poly, Point from, int dx, int dy) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const bool vertical = e.a.x == e.b.x;
    if (dy == 0) {
      if (vertical) {
        const double t = (e.a.x - from.x) * dx;
        if (t > 0.0 && from.y >= std::min(e.a.y, e.b.y) && from.y <= std::max(e.a.y, e.b.y))
          best = std::min(best, t);
      } else if (e.a.y == from.y) {
        for (Point q : {e.a, e.b}) {
          const double t = (q.x - from.x) * dx;
          if (t > 0.0) best = std::min(best, t);
        }
      }
    } else {
      if (!vertical) {
        const double t = (e.a.y - from.y) * dy;
        if (t > 0.0 && from.x >= std::min(e.a.x, e.b.x) && from.x <= std::max(e.a.x, e.b.x))
          best = std::min(best, t);
      } else if (e.a.x == from.x) {
        for (Point q : {e.a, e.b}) {
          const double t = (q.y - from.y) * dy;
          if (t > 0.0) best = std::min(best, t);
        }
      }
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::kPointOutsidePolygon, "axis ray escapes polygon");
  return {from.x + dx * best, from.y + dy * best};
}

std::vector<Cut> compute_visibility_cuts(const Polygon& poly, Point s) {
  const BoundaryFrame frame(poly, s);
  std::vector<Cut> cuts;
  std::set<std::pair<Key, Key>> seen;
  const double tol = poly.tolerance();

  auto consider = [&](Point v, Point q, bool forward_side) {
    if (on_segment(s, {v, q}, tol)) return;
    const double tv = *frame.position(v);
    const double tq = *frame.position(q);
    // forward_side: the convex corner lies on the chain leaving v forwards.
    const bool is_cut = forward_side ? tq < tv : tq > tv;
    if (!is_cut) return;
    const Key kv = key_of(v), kq = key_of(q);
    if (!seen.insert(std::minmax(kv, kq)).second) return;
    Cut c;
    c.reflex_vertex = v;
    c.far_endpoint = q;
    c.axis = v.y == q.y ? Axis::kHorizontal : Axis::kVertical;
    c.pocket_begin = std::min(tv, tq);
    c.pocket_end = std::max(tv, tq);
    c.pocket = frame.chain(c.pocket_begin, c.pocket_end);
    cuts.push_back(std::move(c));
  };

  for (std::size_t i : poly.reflex_indices()) {
    const Point v = poly.vertex(i);
    const Point prev = poly.vertex(i + poly.size() - 1);
    const Point next = poly.vertex(i + 1);
    const auto sgn = [](double d) { return (d > 0) - (d < 0); };
    // Incoming edge continued past v.
    const Point d1{static_cast<double>(sgn(v.x - prev.x)), static_cast<double>(sgn(v.y - prev.y))};
    consider(v, cast_axis_ray(poly, v, static_cast<int>(d1.x), static_cast<int>(d1.y)), true);
    // Outgoing edge continued backwards past v.
    const Point d2{static_cast<double>(sgn(v.x - next.x)), static_cast<double>(sgn(v.y - next.y))};
    consider(v, cast_axis_ray(poly, v, static_cast<int>(d2.x), static_cast<int>(d2.y)), false);
  }
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) {
    return std::tie(a.pocket_begin, a.pocket_end) < std::tie(b.pocket_begin, b.pocket_end);
  });
  for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i].boundary_index = i;
  return cuts;
}

EssentialCutList compute_essential_cuts(const Polygon& poly, Point s) {
  const std::vector<Cut> all = compute_visibility_cuts(poly, s);
  const double tol = poly.tolerance();
  EssentialCutList out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool nests = false;
    for (std::size_t j = 0; j < all.size() && !nests; ++j) {
      if (i == j) continue;
      nests = all[i].pocket_begin <= all[j].pocket_begin + tol &&
              all[j].pocket_end <= all[i].pocket_end + tol;
    }
    if (!nests) out.cuts.push_back(all[i]);
  }
  for (std::size_t i = 0; i < out.cuts.size(); ++i) out.cuts[i].boundary_index = i;
  return out;
}

std::optional<HananGrid::NodeId> HananGrid::find(Point p) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), p);
  if (it == nodes_.end() || !(*it == p)) return std::nullopt;
  return static_cast<NodeId>(std::distance(nodes_.begin(), it));
}

bool HananGrid::on_cut(NodeId id, std::size_t j) const {
  const auto& c = cut_nodes_[j];
  return std::find(c.begin(), c.end(), id) != c.end();
}

std::pair<std::vector<Length>, std::vector<HananGrid::NodeId>> HananGrid::dijkstra(
    NodeId source) const {
  std::vector<Length> dist(nodes_.size(), kUnreached);
  std::vector<NodeId> pred(nodes_.size(), -1);
  using Item = std::pair<Length, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(source)] = 0;
  pq.emplace(0, source);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[static_cast<std::size_t>(u)]) continue;
    for (const Edge& e : adjacency_[static_cast<std::size_t>(u)]) {
      const Length nd = d + e.weight;
      auto& slot = dist[static_cast<std::size_t>(e.to)];
      if (nd < slot) {
        slot = nd;
        pred[static_cast<std::size_t>(e.to)] = u;
        pq.emplace(nd, e.to);
      }
    }
  }
  return {std::move(dist), std::move(pred)};
}

std::vector<Length> HananGrid::distances_from(NodeId source) const {
  return dijkstra(source).first;
}

void HananGrid::run_sources(bool full, unsigned threads) {
  terminal_row_.assign(nodes_.size(), -1);
  std::vector<NodeId> sources;
  auto add = [&](NodeId id) {
    if (terminal_row_[static_cast<std::size_t>(id)] >= 0) return;
    terminal_row_[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(sources.size());
    sources.push_back(id);
  };
  if (full) {
    for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) add(id);
  } else {
    add(s_node_);
    for (const auto& c : cut_nodes_)
      for (NodeId id : c) add(id);
  }
  rows_.assign(sources.size(), {});
  predecessors_.assign(sources.size(), {});
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t r = begin; r < sources.size(); r += stride) {
      auto [d, p] = dijkstra(sources[r]);
      rows_[r] = std::move(d);
      predecessors_[r] = std::move(p);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(sources.size())));
  if (threads == 1) {
    work(0, 1);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
}

Length HananGrid::distance(NodeId a, NodeId b) const {
  if (const auto r = terminal_row_[static_cast<std::size_t>(a)]; r >= 0)
    return rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
  if (const auto r = terminal_row_[static_cast<std::size_t>(b)]; r >= 0)
    return rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)];
  throw std::invalid_argument("grid distance between two non-terminal nodes");
}

std::vector<HananGrid::NodeId> HananGrid::path(NodeId a, NodeId b) const {
  std::vector<NodeId> out;
  if (const auto r = terminal_row_[static_cast<std::size_t>(a)]; r >= 0) {
    const auto& pred = predecessors_[static_cast<std::size_t>(r)];
    for (NodeId v = b; v != -1; v = pred[static_cast<std::size_t>(v)]) out.push_back(v);
    std::reverse(out.begin(), out.end());
  } else if (const auto r2 = terminal_row_[static_cast<std::size_t>(b)]; r2 >= 0) {
    const auto& pred = predecessors_[static_cast<std::size_t>(r2)];
    for (NodeId v = a; v != -1; v = pred[static_cast<std::size_t>(v)]) out.push_back(v);
  } else {
    throw std::invalid_argument("grid path between two non-terminal nodes");
  }
  return out;
}

HananGrid build_hanan_grid(const Polygon& poly, Point s, const EssentialCutList& cuts,
                           const GridOptions& options) {
  if (locate(poly, s) != Location::kBoundary)
    throw Error(ErrorCode::kStartNotOnBoundary, "start point is not on the boundary");
  HananGrid g;

  std::set<std::pair<Key, Key>> line_keys;
  auto add_line = [&](Point a, Point b) {
    if (a == b) return;
    if (b < a) std::swap(a, b);
    if (line_keys.insert({key_of(a), key_of(b)}).second) g.lines_.push_back({a, b});
  };
  auto dir = [](double d) { return (d > 0) - (d < 0); };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const int dx = dir(e.b.x - e.a.x), dy = dir(e.b.y - e.a.y);
    const Point a = poly.is_reflex(i) ? cast_axis_ray(poly, e.a, -dx, -dy) : e.a;
    const Point b = poly.is_reflex((i + 1) % poly.size()) ? cast_axis_ray(poly, e.b, dx, dy) : e.b;
    add_line(a, b);
  }
  for (auto [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
    Point ends[2] = {s, s};
    for (int sign : {-1, 1}) {
      const Point probe{s.x + 0.5 * sign * dx, s.y + 0.5 * sign * dy};
      if (contains(poly, probe)) ends[(sign + 1) / 2] = cast_axis_ray(poly, s, sign * dx, sign * dy);
    }
    add_line(ends[0], ends[1]);
  }

  std::vector<const Segment*> horizontal, vertical;
  for (const Segment& l : g.lines_) (l.a.y == l.b.y ? horizontal : vertical).push_back(&l);
  std::set<Point> pts{s};
  for (const Segment* h : horizontal) {
    pts.insert(h->a);
    pts.insert(h->b);
    for (const Segment* v : vertical) {
      const double x = v->a.x, y = h->a.y;
      if (x >= h->a.x && x <= h->b.x && y >= v->a.y && y <= v->b.y) pts.insert({x, y});
    }
  }
  for (const Segment* v : vertical) {
    pts.insert(v->a);
    pts.insert(v->b);
  }
  g.nodes_.assign(pts.begin(), pts.end());
  g.adjacency_.assign(g.nodes_.size(), {});

  std::set<std::pair<HananGrid::NodeId, HananGrid::NodeId>> edge_set;
  auto nodes_on = [&](const Segment& seg) {
    std::vector<HananGrid::NodeId> ids;
    for (HananGrid::NodeId id = 0; id < static_cast<HananGrid::NodeId>(g.nodes_.size()); ++id) {
      if (on_segment(g.node(id), seg, 1e-9)) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end(), [&](auto l, auto r) {
      return l1(seg.a, g.node(l)) < l1(seg.a, g.node(r));
    });
    return ids;
  };
  for (const Segment& l : g.lines_) {
    const auto ids = nodes_on(l);
    for (std::size_t i = 1; i < ids.size(); ++i) {
      auto [u, v] = std::minmax(ids[i - 1], ids[i]);
      if (!edge_set.insert({u, v}).second) continue;
      const auto w = static_cast<Length>(std::llround(l1(g.node(u), g.node(v))));
      g.adjacency_[static_cast<std::size_t>(u)].push_back({v, w});
      g.adjacency_[static_cast<std::size_t>(v)].push_back({u, w});
    }
  }
  for (auto& adj : g.adjacency_)
    std::sort(adj.begin(), adj.end(), [](const auto& l, const auto& r) { return l.to < r.to; });

  g.s_node_ = *g.find(s);
  for (const Cut& c : cuts.cuts) g.cut_nodes_.push_back(nodes_on(c.chord()));
  g.run_sources(options.full_apsp, options.threads);
  return g;
}

std::vector<Contact> contact_candidates(const HananGrid& grid, HananGrid::NodeId from,
                                        std::size_t cut) {
  std::vector<Contact> out;
  Length best = kUnreached;
  for (HananGrid::NodeId id : grid.cut_nodes(cut)) {
    const Length d = grid.distance(from, id);
    if (d < best) {
      best = d;
      out.clear();
    }
    if (d == best) out.push_back({id, d});
  }
  return out;
}

Contact contact_point(const HananGrid& grid, HananGrid::NodeId from, std::size_t cut) {
  return contact_candidates(grid, from, cut).front();
}

}  // namespace kwatch
