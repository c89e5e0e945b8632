#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "kwatch/io.hpp"

using namespace kwatch;
using namespace kwatch::testing;

namespace {

const char* kSquare = R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0,0],"k":1,"mode":"exact"})";
const char* kU = R"({"vertices":[[0,0],[9,0],[9,5],[7,5],[7,2],[2,2],[2,5],[0,5]],"start":[4,0],"k":2,"mode":"exact"})";

ErrorCode code_of(const char* text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kParseError;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse_instance examples") {
  const Instance sq = parse_instance(kSquare);
  CHECK(sq.vertices.size() == 4);
  CHECK(sq.k == 1);
  CHECK(sq.mode == SolveMode::kExact);
  CHECK_FALSE(sq.epsilon.has_value());

  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"k":1,"mode":"exact"})") == ErrorCode::kSchemaError);
  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0.5,0.5],"k":1,"mode":"exact"})") ==
        ErrorCode::kStartNotOnBoundary);
  CHECK(code_of("{not json") == ErrorCode::kParseError);
  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0,0],"k":0,"mode":"exact"})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0,0],"k":1,"mode":"fptas"})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0,0],"k":1,"mode":"exact","epsilon":0.1})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0,0],"k":1,"mode":"quota","epsilon":0.1})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0,0],"k":1,"mode":"nope"})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],"start":[0,0],"k":1,"mode":"exact","extra":1})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"vertices":[[0,0],[2,0],[0,2],[2,2]],"start":[0,0],"k":1,"mode":"exact"})") ==
        ErrorCode::kSelfIntersecting);
  // Non-orthogonal polygons are fine for quota only.
  const char* tri = R"({"vertices":[[0,0],[4,0],[0,3]],"start":[0,0],"k":1,"mode":"%s"%s})";
  char buf[256];
  std::snprintf(buf, sizeof buf, tri, "exact", "");
  CHECK(code_of(buf) == ErrorCode::kNotOrthogonal);
  std::snprintf(buf, sizeof buf, tri, "quota", R"(,"epsilon":0.5,"quota_fraction":1,"factor_mode":"double")");
  CHECK(parse_instance(buf).factor_mode == FactorMode::kDouble);
}

TEST_CASE("instances survive a serialization round trip") {
  std::mt19937 rng(11);
  const auto all = cases();
  const SolveMode modes[] = {SolveMode::kExact, SolveMode::kFptas, SolveMode::kL2, SolveMode::kQuota,
                             SolveMode::kOracle};
  for (int trial = 0; trial < 60; ++trial) {
    const auto& c = all[rng() % all.size()];
    Instance inst;
    inst.vertices = c.poly.vertices();
    inst.start = c.s;
    inst.k = 1 + static_cast<int>(rng() % 5);
    inst.mode = modes[rng() % 5];
    if (inst.mode == SolveMode::kFptas || inst.mode == SolveMode::kL2 || inst.mode == SolveMode::kQuota)
      inst.epsilon = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
    if (inst.mode == SolveMode::kQuota) {
      inst.quota_fraction = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      inst.factor_mode = rng() % 2 ? FactorMode::kDouble : FactorMode::kOnePlus;
    }
    CHECK(parse_instance(serialize_instance(inst)) == inst);
  }
}

TEST_CASE("run examples") {
  Instance sq = parse_instance(kSquare);
  sq.k = 2;
  const ResultRecord a = run(sq);
  CHECK(a.max_length == 0.0);
  CHECK(a.verification.pass);
  CHECK(a.routes.size() == 2);

  const ResultRecord u = run(parse_instance(kU));
  CHECK(u.max_length == 6.0);
  CHECK(u.verification.pass);
  CHECK(u.metric == Metric::kL1);
  for (std::size_t i = 0; i < u.routes.size(); ++i)
    CHECK(path_length(u.routes[i], u.metric) == doctest::Approx(u.per_route_lengths[i]).epsilon(1e-12));

  Instance big = parse_instance(read(KWATCH_FIXTURE_DIR "/hooks5.json"));
  big.mode = SolveMode::kOracle;
  big.k = 4;
  try {
    run(big);
    FAIL("oversized oracle ran");
  } catch (const Error& e) {
    CHECK(exit_code(e.code()) == 3);
  }
}

TEST_CASE("records re-verify after a JSON round trip") {
  for (const char* name : {"u_base", "hooks3", "spiral_top", "l_notch"}) {
    Instance inst = parse_instance(read(std::string(KWATCH_FIXTURE_DIR "/") + name + ".json"));
    for (SolveMode mode : {SolveMode::kExact, SolveMode::kL2}) {
      inst.mode = mode;
      inst.epsilon = mode == SolveMode::kL2 ? std::optional(0.5) : std::nullopt;
      const ResultRecord rec = run(inst);
      CHECK(rec.verification.pass);
      const ResultRecord back = parse_record(to_json(rec).dump());
      CHECK(canonical_record(back) == canonical_record(rec));
      CHECK(verify_record(inst, back).pass);
    }
  }
}

TEST_CASE("tampered records fail verification") {
  const Instance inst = parse_instance(kU);
  ResultRecord rec = run(inst);
  ResultRecord dropped = rec;
  dropped.routes[0] = {inst.start};
  dropped.per_route_lengths[0] = 0.0;
  dropped.max_length = *std::max_element(dropped.per_route_lengths.begin(), dropped.per_route_lengths.end());
  CHECK_FALSE(verify_record(inst, dropped).pass);

  ResultRecord wrong = rec;
  wrong.per_route_lengths[0] += 1.0;
  CHECK_FALSE(verify_record(inst, wrong).pass);

  ResultRecord outside = rec;
  outside.routes[0].insert(outside.routes[0].begin() + 1, Point{4, 4});
  CHECK_FALSE(verify_record(inst, outside).pass);
}

TEST_CASE("run is deterministic") {
  for (const char* name : {"comb4", "hooks8", "spiral_out"}) {
    const Instance inst = parse_instance(read(std::string(KWATCH_FIXTURE_DIR "/") + name + ".json"));
    CHECK(canonical_record(run(inst)) == canonical_record(run(inst, {.threads = 2})));
  }
}

TEST_CASE("render_svg examples") {
  const Instance sq = parse_instance(kSquare);
  const std::string a = render_svg(sq, run(sq));
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(count(a, "id=\"polygon\"") == 1);
  CHECK(count(a, "id=\"start\"") == 1);
  CHECK(count(a, "stroke-opacity") == 0);

  const Instance u = parse_instance(kU);
  const ResultRecord ur = run(u);
  const std::string b = render_svg(u, ur);
  const auto cuts = b.substr(b.find("id=\"cuts\""));
  CHECK(cuts.find("stroke-dasharray") != std::string::npos);
  CHECK(count(cuts.substr(0, cuts.find("</g>")), "<path") == 2);
  CHECK(count(b, "stroke-opacity") == 2);
  CHECK(count(b, "id=\"grid\"") == 0);
  CHECK(count(render_svg(u, ur, {.grid = true}), "id=\"grid\"") == 1);
}

TEST_CASE("quota record and rendering") {
  const Instance inst = parse_instance(read(KWATCH_FIXTURE_DIR "/u_quota.json"));
  const ResultRecord rec = run(inst);
  CHECK(rec.verification.pass);
  CHECK(rec.verification.method == "area");
  CHECK(*rec.achieved_area >= 29.97);
  CHECK(rec.max_length <= approximation_factor(FactorMode::kDouble, 0.25) * 6.0);
  const std::string svg = render_svg(inst, rec);
  CHECK(count(svg, "id=\"disk\"") == 1);
  CHECK(verify_record(inst, parse_record(to_json(rec).dump())).pass);
}
