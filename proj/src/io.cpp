#include "kwatch/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "kwatch/visibility.hpp"

namespace kwatch {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::kSchemaError, what); }

template <class Json>
Point parse_point(const Json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema(std::string(field) + ": expected a coordinate pair");
  const Point p{j[0].template get<double>(), j[1].template get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) schema(std::string(field) + ": non-finite coordinate");
  return p;
}

ordered_json number(double v) {
  if (std::abs(v) < 9e15 && v == std::floor(v)) return static_cast<std::int64_t>(v);
  return v;
}

ordered_json point_json(Point p) { return ordered_json::array({number(p.x), number(p.y)}); }

ordered_json points_json(const std::vector<Point>& pts) {
  ordered_json out = ordered_json::array();
  for (const Point& p : pts) out.push_back(point_json(p));
  return out;
}

template <class Json>
std::vector<Point> parse_points(const Json& j, const char* field) {
  if (!j.is_array()) schema(std::string(field) + ": expected a list");
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(parse_point(p, field));
  return out;
}

bool needs_epsilon(SolveMode m) {
  return m == SolveMode::kFptas || m == SolveMode::kL2 || m == SolveMode::kQuota;
}

GeodesicPath as_path(const std::vector<Point>& pts, Metric metric) {
  return {pts, path_length(pts, metric), metric};
}

const char* metric_name(Metric m) { return m == Metric::kL1 ? "L1" : "L2"; }

}  // namespace

SolveMode parse_mode(std::string_view name) {
  for (SolveMode m : {SolveMode::kExact, SolveMode::kFptas, SolveMode::kL2, SolveMode::kQuota,
                      SolveMode::kOracle})
    if (name == to_string(m)) return m;
  schema("unknown mode '" + std::string(name) + "'");
}

FactorMode parse_factor_mode(std::string_view name) {
  if (name == "double") return FactorMode::kDouble;
  if (name == "oneplus") return FactorMode::kOnePlus;
  schema("unknown factor_mode '" + std::string(name) + "'");
}

void check_schema(const Instance& inst) {
  if (inst.k < 1) schema("k must be a positive integer");
  if (needs_epsilon(inst.mode) != inst.epsilon.has_value())
    schema(std::string("epsilon is ") + (inst.epsilon ? "not allowed" : "required") + " in mode " +
           to_string(inst.mode));
  if (inst.epsilon && !(*inst.epsilon > 0.0)) schema("epsilon must be positive");
  const bool quota = inst.mode == SolveMode::kQuota;
  if (quota != inst.quota_fraction.has_value())
    schema(quota ? "quota_fraction is required in mode quota" : "quota_fraction is only for mode quota");
  if (quota != inst.factor_mode.has_value())
    schema(quota ? "factor_mode is required in mode quota" : "factor_mode is only for mode quota");
  if (inst.quota_fraction && !(*inst.quota_fraction >= 0.0 && *inst.quota_fraction <= 1.0))
    schema("quota_fraction must lie in [0, 1]");
}

Polygon instance_polygon(const Instance& inst) {
  Polygon poly = validate_polygon(inst.vertices, inst.mode != SolveMode::kQuota);
  if (locate(poly, inst.start) != Location::kBoundary)
    throw Error(ErrorCode::kStartNotOnBoundary, "start point is not on the boundary");
  return poly;
}

Instance parse_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!j.is_object()) schema("instance must be a JSON object");
  static const std::set<std::string> known{"vertices", "start", "k", "mode", "epsilon",
                                           "quota_fraction", "factor_mode"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) schema("unknown field '" + key + "'");
  for (const char* field : {"vertices", "start", "k", "mode"})
    if (!j.contains(field)) schema(std::string("missing field '") + field + "'");

  Instance inst;
  inst.vertices = parse_points(j["vertices"], "vertices");
  inst.start = parse_point(j["start"], "start");
  if (!j["k"].is_number_integer() || j["k"].get<std::int64_t>() < 1 ||
      j["k"].get<std::int64_t>() > 1'000'000)
    schema("k must be a positive integer");
  inst.k = j["k"].get<int>();
  if (!j["mode"].is_string()) schema("mode must be a string");
  inst.mode = parse_mode(j["mode"].get<std::string>());
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_number()) schema("epsilon must be a number");
    inst.epsilon = j["epsilon"].get<double>();
  }
  if (j.contains("quota_fraction")) {
    if (!j["quota_fraction"].is_number()) schema("quota_fraction must be a number");
    inst.quota_fraction = j["quota_fraction"].get<double>();
  }
  if (j.contains("factor_mode")) {
    if (!j["factor_mode"].is_string()) schema("factor_mode must be a string");
    inst.factor_mode = parse_factor_mode(j["factor_mode"].get<std::string>());
  }
  check_schema(inst);
  instance_polygon(inst);
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  ordered_json j;
  j["vertices"] = points_json(inst.vertices);
  j["start"] = point_json(inst.start);
  j["k"] = inst.k;
  j["mode"] = to_string(inst.mode);
  if (inst.epsilon) j["epsilon"] = *inst.epsilon;
  if (inst.quota_fraction) j["quota_fraction"] = *inst.quota_fraction;
  if (inst.factor_mode) j["factor_mode"] = to_string(*inst.factor_mode);
  return j.dump(2);
}

ResultRecord run(const Instance& inst, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  check_schema(inst);
  const Polygon poly = instance_polygon(inst);
  ResultRecord rec;
  rec.mode = inst.mode;
  rec.k = inst.k;
  auto& st = rec.stats;

  if (inst.mode == SolveMode::kQuota) {
    QuotaOptions qo;
    qo.threads = options.threads;
    const QuotaContext ctx(poly, inst.start, qo);
    const double A = *inst.quota_fraction * ctx.polygon_area();
    const QuotaSolution sol = solve_quota(ctx, inst.k, A, *inst.epsilon, *inst.factor_mode);
    rec.metric = Metric::kL2;
    for (const auto& r : sol.routes) rec.routes.push_back(r.waypoints);
    rec.per_route_lengths = sol.per_route_lengths;
    rec.max_length = sol.max_length;
    rec.achieved_area = sol.achieved_area;
    rec.target_area = A;
    st["polygon_area"] = ctx.polygon_area();
    st["start_visible_area"] = ctx.start_visible_area();
    st["factor_mode"] = to_string(sol.factor_mode);
    st["epsilon"] = sol.epsilon;
    st["approximation_factor"] = approximation_factor(sol.factor_mode, sol.epsilon);
    st["r_min"] = sol.r_min;
    st["r_final"] = sol.r_final;
    st["budget_used"] = sol.budget_used;
    st["gamma_length"] = sol.gamma_length;
    st["rmin_bisections"] = sol.rmin_disks.size();
    ordered_json its = ordered_json::array();
    for (const auto& it : sol.iterations) {
      its.push_back({{"r", it.r},
                     {"disk_area", it.disk_area},
                     {"disk_perimeter", it.disk_perimeter},
                     {"feasible", it.feasible},
                     {"budget", it.budget},
                     {"gamma_length", it.gamma_length},
                     {"max_length", it.max_length}});
    }
    st["iterations"] = its;
  } else {
    const auto ctx = make_context(poly, inst.start, {options.full_apsp, options.threads});
    const KwrpOptions ko{options.state_budget, options.threads};
    Solution sol;
    switch (inst.mode) {
      case SolveMode::kExact: sol = exact_dp(ctx, inst.k, ko); break;
      case SolveMode::kFptas: sol = fptas(ctx, inst.k, *inst.epsilon, ko); break;
      case SolveMode::kL2: sol = l2_wrapper(ctx, inst.k, *inst.epsilon, ko); break;
      case SolveMode::kOracle: sol = brute_force_oracle(ctx, inst.k); break;
      case SolveMode::kQuota: break;
    }
    rec.metric = sol.metric;
    for (const auto& r : sol.routes) rec.routes.push_back(r.waypoints);
    rec.per_route_lengths = sol.per_route_lengths;
    rec.max_length = sol.max_length;
    rec.contacts = sol.contacts;
    if (inst.mode == SolveMode::kL2) {
      rec.l1_lengths = sol.l1_lengths;
      rec.l1_max_length = sol.l1_max_length;
    }
    st["essential_cuts"] = ctx.cuts.m();
    st["grid_nodes"] = ctx.grid.size();
    st["states_generated"] = sol.stats.states_generated;
    st["states_kept"] = sol.stats.states_kept;
    st["layers"] = sol.stats.layers;
  }
  rec.verification = verify_record(inst, rec);
  st["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

Verification verify_record(const Instance& inst, const ResultRecord& rec) {
  Verification v;
  const bool quota = inst.mode == SolveMode::kQuota;
  v.method = quota ? "area" : "cover";
  auto fail = [&](std::string why) { v.failures.push_back(std::move(why)); };
  try {
    const Polygon poly = instance_polygon(inst);
    const double tol = 1e-6 * std::max(1.0, poly.diameter());
    if (rec.mode != inst.mode) fail("mode differs from the instance");
    if (rec.routes.size() != static_cast<std::size_t>(inst.k)) fail("route count differs from k");
    if (rec.per_route_lengths.size() != rec.routes.size()) fail("length list does not match routes");
    double mx = 0.0;
    for (std::size_t i = 0; i < rec.routes.size(); ++i) {
      const auto& w = rec.routes[i];
      if (w.empty()) {
        fail("route " + std::to_string(i) + " is empty");
        continue;
      }
      if (!(w.front() == inst.start) || !(w.back() == inst.start))
        fail("route " + std::to_string(i) + " is not anchored at the start");
      bool inside = true;
      for (const Point& p : w) inside = inside && contains(poly, p);
      for (std::size_t j = 1; inside && j < w.size(); ++j)
        inside = point_sees_point(poly, w[j - 1], w[j]);
      if (!inside) fail("route " + std::to_string(i) + " leaves the polygon");
      const double len = path_length(w, rec.metric);
      if (i < rec.per_route_lengths.size() && std::abs(len - rec.per_route_lengths[i]) > tol)
        fail("route " + std::to_string(i) + " length does not match its waypoints");
      mx = std::max(mx, len);
    }
    if (std::abs(mx - rec.max_length) > tol) fail("max_length does not match the routes");
    if (v.failures.empty()) {
      std::vector<GeodesicPath> paths;
      for (const auto& w : rec.routes) paths.push_back(as_path(w, rec.metric));
      if (quota) {
        const double target = *inst.quota_fraction * polygon_area(poly);
        const double area = route_visible_area(poly, paths);
        v.recomputed_area = area;
        if (area < target * (1.0 - kAreaTolerance)) fail("visible area misses the quota");
        if (rec.achieved_area &&
            std::abs(area - *rec.achieved_area) > kAreaTolerance * std::max(1.0, area))
          fail("reported area does not match the recomputation");
      } else {
        const CoverReport cover = verify_cover(poly, compute_essential_cuts(poly, inst.start), paths);
        v.unvisited_cuts = cover.unvisited_cuts;
        v.invisible_samples = cover.invisible_samples.size();
        v.samples_checked = cover.samples_checked;
        if (!cover.unvisited_cuts.empty()) fail("essential cuts left unvisited");
        if (!cover.invisible_samples.empty()) fail("interior samples left unseen");
      }
    }
  } catch (const Error& e) {
    fail(std::string(to_string(e.code())) + ": " + e.what());
  }
  v.pass = v.failures.empty();
  return v;
}

nlohmann::ordered_json to_json(const ResultRecord& rec) {
  ordered_json j;
  j["mode"] = to_string(rec.mode);
  j["metric"] = metric_name(rec.metric);
  j["k"] = rec.k;
  ordered_json routes = ordered_json::array();
  for (const auto& r : rec.routes) routes.push_back(points_json(r));
  j["routes"] = routes;
  j["per_route_lengths"] = rec.per_route_lengths;
  j["max_length"] = rec.max_length;
  if (!rec.contacts.empty()) {
    ordered_json c = ordered_json::array();
    for (const auto& r : rec.contacts) c.push_back(points_json(r));
    j["contacts"] = c;
  }
  if (rec.l1_max_length) {
    j["l1_lengths"] = rec.l1_lengths;
    j["l1_max_length"] = *rec.l1_max_length;
  }
  if (rec.achieved_area) j["achieved_area"] = *rec.achieved_area;
  if (rec.target_area) j["target_area"] = *rec.target_area;
  const Verification& v = rec.verification;
  ordered_json vj;
  vj["pass"] = v.pass;
  vj["method"] = v.method;
  vj["failures"] = v.failures;
  if (v.method == "cover") {
    vj["unvisited_cuts"] = v.unvisited_cuts;
    vj["invisible_samples"] = v.invisible_samples;
    vj["samples_checked"] = v.samples_checked;
  }
  if (v.recomputed_area) vj["recomputed_area"] = *v.recomputed_area;
  j["verification"] = vj;
  j["stats"] = rec.stats;
  return j;
}

ResultRecord parse_record(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  ResultRecord rec;
  try {
    rec.mode = parse_mode(j.at("mode").get<std::string>());
    const auto metric = j.at("metric").get<std::string>();
    if (metric != "L1" && metric != "L2") schema("metric must be L1 or L2");
    rec.metric = metric == "L1" ? Metric::kL1 : Metric::kL2;
    rec.k = j.at("k").get<int>();
    for (const auto& r : j.at("routes")) rec.routes.push_back(parse_points(r, "routes"));
    rec.per_route_lengths = j.at("per_route_lengths").get<std::vector<double>>();
    rec.max_length = j.at("max_length").get<double>();
    if (j.contains("contacts"))
      for (const auto& r : j["contacts"]) rec.contacts.push_back(parse_points(r, "contacts"));
    if (j.contains("l1_max_length")) {
      rec.l1_lengths = j.at("l1_lengths").get<std::vector<double>>();
      rec.l1_max_length = j["l1_max_length"].get<double>();
    }
    if (j.contains("achieved_area")) rec.achieved_area = j["achieved_area"].get<double>();
    if (j.contains("target_area")) rec.target_area = j["target_area"].get<double>();
    if (j.contains("verification")) {
      const auto& vj = j["verification"];
      rec.verification.pass = vj.at("pass").get<bool>();
      rec.verification.method = vj.at("method").get<std::string>();
      rec.verification.failures = vj.at("failures").get<std::vector<std::string>>();
      if (vj.contains("unvisited_cuts"))
        rec.verification.unvisited_cuts = vj["unvisited_cuts"].get<std::vector<std::size_t>>();
      if (vj.contains("invisible_samples"))
        rec.verification.invisible_samples = vj["invisible_samples"].get<std::size_t>();
      if (vj.contains("samples_checked"))
        rec.verification.samples_checked = vj["samples_checked"].get<std::size_t>();
      if (vj.contains("recomputed_area"))
        rec.verification.recomputed_area = vj["recomputed_area"].get<double>();
    }
    if (j.contains("stats")) rec.stats = j["stats"];
  } catch (const nlohmann::json::exception& e) {
    schema(std::string("result record: ") + e.what());
  }
  return rec;
}

std::string canonical_record(const ResultRecord& rec) {
  ordered_json j = to_json(rec);
  j["stats"].erase("seconds");
  return j.dump();
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInstanceTooLarge:
    case ErrorCode::kBudgetInfeasible:
      return 3;
    default:
      return 4;
  }
}

}  // namespace kwatch
