#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "circuit_route/commands.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace circuit_route;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("circuit_route_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig generated_in(const TempDir& dir) {
  RunConfig cfg;
  cfg.out_dir = dir.path.string();
  cfg.seed = 5;
  cfg.nodes = 8;
  cfg.edges = 14;
  cfg.requests = 60;
  return cfg;
}

RunConfig with_inputs(RunConfig cfg, const TempDir& dir) {
  cfg.graph_path = dir / "graph.json";
  cfg.trace_path = dir / "trace.jsonl";
  cfg.cert_path = dir / "cert.json";
  return cfg;
}

int call(Command cmd, const RunConfig& cfg, std::string* output = nullptr) {
  std::ostringstream out, err;
  const int code = invoke(cmd, cfg, out, err);
  if (output) *output = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("generate, run and report") {
  TempDir dir("pipeline");
  RunConfig gen = generated_in(dir);
  REQUIRE(call(cmd_generate, gen) == kExitOk);
  CHECK(fs::exists(dir / "graph.json"));
  CHECK(fs::exists(dir / "trace.jsonl"));
  CHECK(fs::exists(dir / "cert.json"));

  RunConfig run = with_inputs(gen, dir);
  std::string text;
  REQUIRE(call(cmd_run, run, &text) == kExitOk);
  CHECK(text.find("FAIL") == std::string::npos);
  auto audit = nlohmann::json::parse(slurp(dir / "audit.json"));
  CHECK(audit["pass"] == true);
  CHECK(audit["checks"].size() == all_checks().size());
  auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  CHECK(metrics["events"] == 120);
  CHECK(metrics["certificate_load"].get<double>() <= 1.0);
  CHECK(metrics["peak_load"].get<double>() <= metrics["load_bound"].get<double>());
  // Frozen values for seed 5.
  CHECK(metrics["alive_peak"] == 16);
  CHECK(metrics["peak_load"] == 2.0);
  CHECK(metrics["peak_load_t"] == 86);
  CHECK(metrics["reroutes_total"] == 0);
  CHECK(metrics["max_x"].get<double>() == doctest::Approx(0.028865867284333345).epsilon(1e-15));

  REQUIRE(call(cmd_report, run) == kExitOk);
  auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["within_bound"] == true);
  CHECK(report["ratio"].get<double>() >= 1.0);

  run.format = "csv";
  REQUIRE(call(cmd_report, run) == kExitOk);
  const std::string csv = slurp(dir / "report.csv");
  CHECK(csv.rfind("reference,alg_load,reference_load,ratio,bound,within_bound,flagged\r\n", 0) == 0);
  CHECK(slurp(dir / "edge_loads.csv").rfind("edge,u,v,capacity,peak_paths,peak_load\r\n", 0) == 0);
  CHECK(fs::exists(dir / "reroutes.csv"));
}

TEST_CASE("same seed gives byte-identical artifacts") {
  TempDir a("det_a");
  TempDir b("det_b");
  for (const TempDir* dir : {&a, &b}) {
    RunConfig gen = generated_in(*dir);
    gen.kind = "churn";
    gen.cycles = 20;
    REQUIRE(call(cmd_generate, gen) == kExitOk);
    REQUIRE(call(cmd_run, with_inputs(gen, *dir)) == kExitOk);
  }
  for (const char* name : {"graph.json", "trace.jsonl", "cert.json", "metrics.json", "audit.json"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("input errors exit 2") {
  TempDir dir("errors");
  RunConfig gen = generated_in(dir);
  REQUIRE(call(cmd_generate, gen) == kExitOk);
  RunConfig run = with_inputs(gen, dir);

  {
    std::ofstream append(run.trace_path, std::ios::app);
    append << "{\"t\":100000,\"kind\":\"arrive\",\"k\":1,\"s\":0,\"d\":1}\n";
  }
  std::string text;
  CHECK(call(cmd_run, run, &text) == kExitInput);
  CHECK(text.find("arrives twice") != std::string::npos);

  RunConfig missing = run;
  missing.graph_path = dir / "nope.json";
  CHECK(call(cmd_run, missing) == kExitInput);

  RunConfig no_trace;
  no_trace.out_dir = dir.path.string();
  CHECK(call(cmd_run, no_trace) == kExitInput);

  RunConfig bad_tol = run;
  bad_tol.tol = -1.0;
  CHECK(call(cmd_run, bad_tol) == kExitInput);

  RunConfig no_metrics = run;
  no_metrics.out_dir = dir / "fresh";
  CHECK(call(cmd_report, no_metrics) == kExitInput);
}

TEST_CASE("check selection") {
  TempDir dir("select");
  RunConfig gen = generated_in(dir);
  REQUIRE(call(cmd_generate, gen) == kExitOk);
  RunConfig run = with_inputs(gen, dir);
  run.checks = {Check::x_cap};
  std::string text;
  REQUIRE(call(cmd_run, run, &text) == kExitOk);
  CHECK(text.find("pass x-cap") != std::string::npos);
  CHECK(text.find("weak-duality") == std::string::npos);
  auto audit = nlohmann::json::parse(slurp(dir / "audit.json"));
  for (const auto& c : audit["checks"]) CHECK(c["enabled"] == (c["name"] == "x-cap"));
}

TEST_CASE("parse_check names") {
  for (Check c : all_checks()) CHECK(parse_check(check_name(c)) == c);
  CHECK_FALSE(parse_check("nonsense"));
}
