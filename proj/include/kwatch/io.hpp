#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kwatch/geometry.hpp"
#include "kwatch/kwrp.hpp"
#include "kwatch/quota.hpp"

namespace kwatch {

struct Instance {
  std::vector<Point> vertices;
  Point start;
  int k = 1;
  SolveMode mode = SolveMode::kExact;
  std::optional<double> epsilon;         // fptas, l2, quota
  std::optional<double> quota_fraction;  // quota
  std::optional<FactorMode> factor_mode; // quota

  friend bool operator==(const Instance&, const Instance&) = default;
};

SolveMode parse_mode(std::string_view name);
FactorMode parse_factor_mode(std::string_view name);

/// Validates the schema, the polygon and the start point.
Instance parse_instance(std::string_view text);
/// Throws SchemaError when mode-specific fields are missing or extra.
void check_schema(const Instance& inst);
std::string serialize_instance(const Instance& inst);
Polygon instance_polygon(const Instance& inst);

struct Verification {
  bool pass = false;
  std::string method;  // "cover" or "area"
  std::vector<std::string> failures;
  std::vector<std::size_t> unvisited_cuts;
  std::size_t invisible_samples = 0;
  std::size_t samples_checked = 0;
  std::optional<double> recomputed_area;
};

struct ResultRecord {
  SolveMode mode = SolveMode::kExact;
  Metric metric = Metric::kL1;
  int k = 1;
  std::vector<std::vector<Point>> routes;
  std::vector<double> per_route_lengths;
  double max_length = 0.0;
  std::vector<std::vector<Point>> contacts;  // grid modes
  std::vector<double> l1_lengths;            // l2 mode
  std::optional<double> l1_max_length;
  std::optional<double> achieved_area;       // quota
  std::optional<double> target_area;
  Verification verification;
  // Everything under "stats" except "seconds" is deterministic.
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
};

struct RunOptions {
  unsigned threads = 1;
  bool full_apsp = false;
  std::size_t state_budget = KwrpOptions{}.state_budget;
};

ResultRecord run(const Instance& inst, const RunOptions& options = {});
/// Independent re-check of a record against its instance.
Verification verify_record(const Instance& inst, const ResultRecord& rec);

nlohmann::ordered_json to_json(const ResultRecord& rec);
ResultRecord parse_record(std::string_view text);
/// Record JSON with timing fields removed, for determinism comparisons.
std::string canonical_record(const ResultRecord& rec);

struct SvgOptions {
  bool grid = false;
  double width = 640.0;
};

std::string render_svg(const Instance& inst, const ResultRecord& rec, const SvgOptions& options = {});

/// Process exit status for a failed run.
int exit_code(ErrorCode code);

}  // namespace kwatch
