#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "kwatch/geometry.hpp"
#include "kwatch/kwrp.hpp"
#include "kwatch/visibility.hpp"

namespace kwatch {

/// Points within geodesic L2 distance r of s, as the union over s and the
/// reflex vertices u of V(u) clipped to the disk of radius r - d(s, u).
struct GeodesicDisk {
  Point center;
  double radius = 0.0;
  std::vector<Ring> rings;  // polygonized union, outer rings counterclockwise
  std::vector<Arc> arcs;    // one arc family per apex, before clipping
  double area = 0.0;
  double perimeter = 0.0;
};

enum class FactorMode { kDouble, kOnePlus };
const char* to_string(FactorMode mode);
/// Approximation slack of each schedule for a given epsilon.
double epsilon_prime(FactorMode mode, double epsilon);
double approximation_factor(FactorMode mode, double epsilon);

struct QuotaOptions {
  std::size_t sample_target = 4096;   // stratified interior samples for tour scoring
  std::size_t candidate_cap = 1200;   // |S_{delta,r}| cap, enforced by coarsening delta
  int max_tour_vertices = 8;
  int beam_width = 6;
  double area_tolerance = kAreaTolerance;
  double radius_tolerance = 1e-3;     // relative, for the bisection on r
  bool verify_monotone = false;       // rescan every budget value after the binary search
  unsigned threads = 1;
  std::uint32_t seed = 0x5eed;
};

/// Shared per-instance data: router, samples, cached areas.
class QuotaContext {
 public:
  QuotaContext(const Polygon& poly, Point s, QuotaOptions options = {});

  const Polygon& polygon() const { return poly_; }
  Point start() const { return s_; }
  const GeodesicRouter& router() const { return router_; }
  const QuotaOptions& options() const { return options_; }
  double polygon_area() const { return area_; }
  double start_visible_area() const { return start_visible_; }
  /// Largest geodesic distance from s to a point of P.
  double geodesic_radius() const { return radius_; }
  /// Geodesic L2 distance from s.
  double distance_from_start(Point p) const;

  const std::vector<double>& sample_x() const { return xs_; }
  const std::vector<double>& sample_y() const { return ys_; }
  std::size_t sample_count() const { return xs_.size(); }
  /// Bitset over the samples of V(p).
  std::vector<std::uint64_t> visible_samples(Point p) const;

 private:
  Polygon poly_;
  Point s_;
  QuotaOptions options_;
  GeodesicRouter router_;
  double area_ = 0.0;
  double start_visible_ = 0.0;
  double radius_ = 0.0;
  std::vector<double> start_reflex_;  // d(s, u) per reflex vertex
  std::vector<double> xs_, ys_;
};

GeodesicDisk geodesic_disk(const Polygon& poly, Point s, double r);
GeodesicDisk geodesic_disk(const QuotaContext& ctx, double r);
/// |C_g(r) U V(boundary of C_g(r))|.
double disk_visible_area(const QuotaContext& ctx, const GeodesicDisk& disk);

struct RminResult {
  double r_min = 0.0;
  int iterations = 0;
  std::vector<GeodesicDisk> disks;  // every disk evaluated
};

RminResult rmin_search(const QuotaContext& ctx, double A);

struct BudgetRoute {
  GeodesicPath route;  // closed, through s, L2 geodesic legs
  std::vector<Point> tour;  // chosen vertices of S_{delta,r}, s excluded
  double area = 0.0;
  double budget = 0.0;
  double delta = 0.0;
  std::size_t candidates = 0;
};

BudgetRoute budget_route(const QuotaContext& ctx, const GeodesicDisk& disk, double B,
                         double epsilon, double A);

struct BudgetSearch {
  double budget = 0.0;  // B*
  BudgetRoute best;
  std::size_t probes = 0;
  bool monotone = true;  // false when probes disagreed and a linear scan ran
};

BudgetSearch budget_binary_search(const QuotaContext& ctx, const GeodesicDisk& disk,
                                  double r_min, double epsilon, double A);

struct QuotaIteration {
  double r = 0.0;
  double disk_area = 0.0;
  double disk_perimeter = 0.0;
  double budget = 0.0;
  double gamma_length = 0.0;
  double max_length = 0.0;
  bool feasible = false;
};

struct QuotaSolution {
  std::vector<GeodesicPath> routes;
  std::vector<double> per_route_lengths;
  double max_length = 0.0;
  double achieved_area = 0.0;
  double target_area = 0.0;
  double r_min = 0.0;
  double r_final = 0.0;
  double budget_used = 0.0;
  double gamma_length = 0.0;
  GeodesicPath gamma;  // the single route that was split
  GeodesicDisk disk;   // C_g(r_final)
  FactorMode factor_mode = FactorMode::kDouble;
  double epsilon = 0.0;
  std::vector<QuotaIteration> iterations;
  std::vector<GeodesicDisk> rmin_disks;
  double seconds = 0.0;
};

/// Splits a closed route through s into k pieces of equal arclength and closes
/// each piece with geodesics to and from s.
std::vector<GeodesicPath> split_route(const GeodesicRouter& router, const GeodesicPath& gamma,
                                      int k);

QuotaSolution solve_quota(const QuotaContext& ctx, int k, double A, double epsilon,
                          FactorMode mode);

}  // namespace kwatch
