#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kwatch/io.hpp"

namespace fs = std::filesystem;
using namespace kwatch;

namespace {

struct Overrides {
  std::string mode;
  int k = 0;
  double epsilon = 0.0;
  double quota = -1.0;
  std::string factor_mode;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  out << text;
}

// Flags win over the file. Fields that the final mode does not take are dropped.
Instance load(const std::string& path, const Overrides& o) {
  Instance inst = parse_instance(read_file(path));
  if (!o.mode.empty()) inst.mode = parse_mode(o.mode);
  if (o.k > 0) inst.k = o.k;
  if (o.epsilon > 0.0) inst.epsilon = o.epsilon;
  if (o.quota >= 0.0) inst.quota_fraction = o.quota;
  if (!o.factor_mode.empty()) inst.factor_mode = parse_factor_mode(o.factor_mode);
  const bool quota = inst.mode == SolveMode::kQuota;
  if (inst.mode == SolveMode::kExact || inst.mode == SolveMode::kOracle) inst.epsilon.reset();
  if (!quota) {
    inst.quota_fraction.reset();
    inst.factor_mode.reset();
  }
  check_schema(inst);
  instance_polygon(inst);
  return inst;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--mode", o.mode, "exact, fptas, l2, quota or oracle");
  cmd->add_option("--k", o.k, "number of watchmen")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", o.epsilon, "approximation parameter")->check(CLI::PositiveNumber);
  cmd->add_option("--quota", o.quota, "required fraction of the polygon area")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--factor-mode", o.factor_mode, "double or oneplus");
}

void report(const Error& e) {
  nlohmann::ordered_json j;
  j["error"] = to_string(e.code());
  j["message"] = e.what();
  std::cerr << j.dump() << "\n";
}

std::vector<std::string> corpus(const std::vector<std::string>& files, const std::string& dir) {
  std::vector<std::string> out = files;
  if (!dir.empty()) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::kParseError, "not a directory: " + dir);
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".json") found.push_back(entry.path().string());
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-watchmen route solver"};
  app.require_subcommand(1);
  Overrides o;
  unsigned threads = 1;
  bool grid_debug = false;
  std::string instance_path, result_path, svg_path, seed_dir;
  std::vector<std::string> bench_files;

  auto* solve = app.add_subcommand("solve", "solve an instance and print the result record");
  solve->add_option("instance", instance_path)->required();
  add_overrides(solve, o);
  solve->add_option("--svg", svg_path, "also render to this file");
  solve->add_flag("--grid-debug", grid_debug, "all-pairs grid table; grid layer in the SVG");
  solve->add_option("--threads", threads)->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "re-check a result record against its instance");
  verify->add_option("instance", instance_path)->required();
  verify->add_option("result", result_path)->required();
  add_overrides(verify, o);

  auto* render = app.add_subcommand("render", "draw an instance and its routes as SVG");
  render->add_option("instance", instance_path)->required();
  render->add_option("result", result_path, "result record; solved on the fly when omitted");
  render->add_option("-o,--output", svg_path)->required();
  add_overrides(render, o);
  render->add_flag("--grid-debug", grid_debug, "draw the Hanan grid");
  render->add_option("--threads", threads)->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("bench", "time a corpus of instances, CSV on stdout");
  bench->add_option("instances", bench_files);
  bench->add_option("--seed-corpus", seed_dir, "directory of instance files");
  add_overrides(bench, o);
  bench->add_option("--threads", threads)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  try {
    const RunOptions run_options{threads, grid_debug};
    if (solve->parsed()) {
      const Instance inst = load(instance_path, o);
      const ResultRecord rec = run(inst, run_options);
      std::cout << to_json(rec).dump(2) << "\n";
      if (!svg_path.empty()) write_file(svg_path, render_svg(inst, rec, {.grid = grid_debug}));
      return rec.verification.pass ? 0 : 2;
    }
    if (verify->parsed()) {
      const Instance inst = load(instance_path, o);
      const ResultRecord rec = parse_record(read_file(result_path));
      const Verification v = verify_record(inst, rec);
      ResultRecord shown = rec;
      shown.verification = v;
      std::cout << to_json(shown)["verification"].dump(2) << "\n";
      return v.pass ? 0 : 2;
    }
    if (render->parsed()) {
      const Instance inst = load(instance_path, o);
      const ResultRecord rec =
          result_path.empty() ? run(inst, run_options) : parse_record(read_file(result_path));
      write_file(svg_path, render_svg(inst, rec, {.grid = grid_debug}));
      return 0;
    }
    if (bench->parsed()) {
      const auto files = corpus(bench_files, seed_dir);
      if (files.empty()) throw Error(ErrorCode::kSchemaError, "bench needs instances or --seed-corpus");
      std::cout << "instance,mode,k,epsilon,max_length,time\n";
      int worst = 0;
      for (const auto& path : files) {
        const auto name = fs::path(path).stem().string();
        try {
          const Instance inst = load(path, o);
          const ResultRecord rec = run(inst, run_options);
          std::cout << name << "," << to_string(inst.mode) << "," << inst.k << ","
                    << (inst.epsilon ? std::to_string(*inst.epsilon) : "") << ","
                    << rec.max_length << "," << rec.stats["seconds"].get<double>() << "\n";
          if (!rec.verification.pass) worst = std::max(worst, 2);
        } catch (const Error& e) {
          report(e);
          std::cout << name << ",error,,,," << "\n";
          worst = std::max(worst, exit_code(e.code()));
        }
      }
      return worst;
    }
  } catch (const Error& e) {
    report(e);
    return exit_code(e.code());
  }
  return 4;
}
