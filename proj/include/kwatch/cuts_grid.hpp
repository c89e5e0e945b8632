#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kwatch/geometry.hpp"
#include "kwatch/visibility.hpp"

namespace kwatch {

/// Integer length on the orthogonal k-WRP path.
using Length = std::int64_t;

enum class Axis { kHorizontal, kVertical };

/// A chord extending an edge at a reflex vertex. The pocket is the side not
/// containing s; it corresponds to the boundary interval
/// [pocket_begin, pocket_end] measured counterclockwise from s.
struct Cut {
  Point reflex_vertex;
  Point far_endpoint;
  Axis axis = Axis::kHorizontal;
  Ring pocket;
  double pocket_begin = 0.0;
  double pocket_end = 0.0;
  std::size_t boundary_index = 0;

  Segment chord() const { return {reflex_vertex, far_endpoint}; }
  bool contains(Point p) const;
};

struct EssentialCutList {
  std::vector<Cut> cuts;  // ordered by boundary_index
  std::size_t m() const { return cuts.size(); }
};

/// Arclength from s to p walking the boundary counterclockwise. Throws
/// StartNotOnBoundary when s is not on the boundary and PointOutsidePolygon
/// when p is not.
double boundary_position(const Polygon& poly, Point s, Point p);

/// Every visibility cut with respect to s, deduplicated by chord.
std::vector<Cut> compute_visibility_cuts(const Polygon& poly, Point s);

/// Visibility cuts whose pockets contain no other pocket, sorted by the
/// first pocket boundary point met when walking from s.
EssentialCutList compute_essential_cuts(const Polygon& poly, Point s);

/// First boundary point hit by the axis-parallel ray from `from` in
/// direction (dx, dy). Integer polygons only.
Point cast_axis_ray(const Polygon& poly, Point from, int dx, int dy);

struct GridOptions {
  bool full_apsp = false;  // rows for every node, not just s and cut nodes
  unsigned threads = 1;
};

class HananGrid {
 public:
  using NodeId = std::int32_t;
  struct Edge {
    NodeId to;
    Length weight;
  };

  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }
  std::optional<NodeId> find(Point p) const;
  NodeId s_node() const { return s_node_; }
  const std::vector<Edge>& neighbors(NodeId id) const {
    return adjacency_[static_cast<std::size_t>(id)];
  }
  /// Maximal grid lines (edges plus their extensions, and the lines through s).
  const std::vector<Segment>& lines() const { return lines_; }

  std::size_t cut_count() const { return cut_nodes_.size(); }
  /// Nodes on cut j, ordered from the reflex vertex towards the far endpoint.
  const std::vector<NodeId>& cut_nodes(std::size_t j) const { return cut_nodes_[j]; }
  bool on_cut(NodeId id, std::size_t j) const;

  /// Geodesic L1 distance; one endpoint must be a terminal (s or a cut node)
  /// unless the grid was built with full APSP.
  Length distance(NodeId a, NodeId b) const;
  bool is_terminal(NodeId id) const { return terminal_row_[static_cast<std::size_t>(id)] >= 0; }
  /// Node sequence of a shortest grid path; same terminal rule as distance().
  std::vector<NodeId> path(NodeId a, NodeId b) const;
  /// Single-source shortest distances over the whole grid.
  std::vector<Length> distances_from(NodeId source) const;

 private:
  friend HananGrid build_hanan_grid(const Polygon&, Point, const EssentialCutList&,
                                    const GridOptions&);
  void run_sources(bool full, unsigned threads);
  std::pair<std::vector<Length>, std::vector<NodeId>> dijkstra(NodeId source) const;

  std::vector<Point> nodes_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<Segment> lines_;
  std::vector<std::vector<NodeId>> cut_nodes_;
  NodeId s_node_ = -1;
  std::vector<std::int32_t> terminal_row_;         // node -> row or -1
  std::vector<std::vector<Length>> rows_;          // row -> distance to every node
  std::vector<std::vector<NodeId>> predecessors_;  // row -> shortest-path tree
};

HananGrid build_hanan_grid(const Polygon& poly, Point s, const EssentialCutList& cuts,
                           const GridOptions& options = {});

struct Contact {
  HananGrid::NodeId node = -1;
  Length distance = 0;
};

/// Grid node on cut j nearest to `from`; ties go to the node nearer the
/// cut's reflex vertex.
Contact contact_point(const HananGrid& grid, HananGrid::NodeId from, std::size_t cut);
/// All grid nodes on cut j attaining the minimum distance from `from`.
std::vector<Contact> contact_candidates(const HananGrid& grid, HananGrid::NodeId from,
                                        std::size_t cut);

}  // namespace kwatch
