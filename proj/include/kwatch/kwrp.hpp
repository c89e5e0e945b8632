#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kwatch/cuts_grid.hpp"
#include "kwatch/geometry.hpp"

namespace kwatch {

enum class SolveMode { kExact, kFptas, kL2, kOracle, kQuota };
const char* to_string(SolveMode mode);

struct SolveStats {
  std::size_t states_generated = 0;
  std::size_t states_kept = 0;  // largest layer after dominance pruning
  std::size_t layers = 0;
  double seconds = 0.0;
};

/// k closed routes anchored at s. For the grid solvers each route is the
/// concatenation of grid shortest paths through `contacts`.
struct Solution {
  SolveMode mode = SolveMode::kExact;
  Metric metric = Metric::kL1;
  std::vector<GeodesicPath> routes;
  std::vector<double> per_route_lengths;
  double max_length = 0.0;
  std::vector<std::vector<Point>> contacts;
  // Only the L2 wrapper fills these: lengths of the grid routes it started from.
  std::vector<double> l1_lengths;
  double l1_max_length = 0.0;
  SolveStats stats;
};

struct KwrpOptions {
  std::size_t state_budget = 20'000'000;
  unsigned threads = 1;
};

/// Everything the grid solvers share for one (P, s).
struct KwrpContext {
  Polygon poly;
  Point s;
  EssentialCutList cuts;
  HananGrid grid;
};

KwrpContext make_context(const Polygon& poly, Point s, const GridOptions& grid_options = {});
/// Same polygon and start, but only the given cuts must be visited.
KwrpContext make_context(const Polygon& poly, Point s, EssentialCutList cuts,
                         const GridOptions& grid_options = {});

struct SingleRoute {
  Length length = 0;
  GeodesicPath route;
  std::vector<Point> contacts;
};

SingleRoute single_route_opt(const KwrpContext& ctx);
Solution exact_dp(const KwrpContext& ctx, int k, const KwrpOptions& options = {});
Solution fptas(const KwrpContext& ctx, int k, double epsilon, const KwrpOptions& options = {});
Solution l2_wrapper(const KwrpContext& ctx, int k, double epsilon,
                    const KwrpOptions& options = {});
/// Tries every assignment of cuts to watchmen. m <= 8, k <= 3.
Solution brute_force_oracle(const KwrpContext& ctx, int k);

struct CoverReport {
  bool pass = true;
  std::vector<std::size_t> unvisited_cuts;
  std::vector<Point> invisible_samples;
  std::size_t samples_checked = 0;
};

struct CoverOptions {
  int samples_per_axis = 40;
  std::vector<Point> extra_samples;  // checked in addition to the lattice
};

/// Cut visitation is decided exactly; the visibility half samples a lattice
/// of interior points and asks whether each one sees some route segment.
CoverReport verify_cover(const Polygon& poly, const EssentialCutList& cuts,
                         const std::vector<GeodesicPath>& routes,
                         const CoverOptions& options = {});

}  // namespace kwatch
