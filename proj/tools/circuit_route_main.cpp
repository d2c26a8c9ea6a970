// circuit-route: generate traces, replay them through the online router with
// the invariant audit, and report competitive ratios.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "circuit_route/commands.hpp"

using namespace circuit_route;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--graph", cfg.graph_path, "graph JSON file");
  sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online virtual-circuit routing with rerouting, plus invariant audit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::string> checks;

  auto* gen = app.add_subcommand("generate", "generate a graph, trace and planted certificate");
  add_common(gen, cfg);
  gen->add_option("--kind", cfg.kind, "planted or churn")->capture_default_str();
  gen->add_option("--nodes", cfg.nodes, "node count of a generated graph")->capture_default_str();
  gen->add_option("--edges", cfg.edges, "edge count of a generated graph")->capture_default_str();
  gen->add_flag("--directed", cfg.directed, "generate a directed graph");
  gen->add_option("--max-capacity", cfg.max_capacity, "capacities drawn from 1..N")->capture_default_str();
  gen->add_option("--requests", cfg.requests, "planted: number of requests")->capture_default_str();
  gen->add_option("--max-duration", cfg.max_duration, "planted: longest lifetime in steps")->capture_default_str();
  gen->add_option("--max-alive", cfg.max_alive, "planted: concurrency cap (0 = none)")->capture_default_str();
  gen->add_option("--cycles", cfg.cycles, "churn: fill/drain cycles")->capture_default_str();
  gen->add_option("--focus", cfg.focus, "churn: focus edge id (default: first with an alternative)");

  auto* run = app.add_subcommand("run", "replay a trace through the router and audit it");
  add_common(run, cfg);
  run->add_option("--trace", cfg.trace_path, "trace JSONL file")->required();
  run->add_option("--cert", cfg.cert_path, "planted certificate");
  run->add_option("--check", checks, "check to enable (repeatable; 'all' for every check)");
  run->add_option("--tol", cfg.tol, "absolute tolerance for accumulated quantities")->capture_default_str();

  auto* report = app.add_subcommand("report", "competitive ratio and load tables from a run");
  add_common(report, cfg);
  report->add_option("--trace", cfg.trace_path, "trace JSONL file")->required();
  report->add_option("--cert", cfg.cert_path, "planted certificate (reference load)");
  report->add_flag("--oracle", cfg.oracle, "use the enumerated optimum as reference");
  report->add_option("--budget", cfg.budget, "enumeration budget")->capture_default_str();
  report->add_option("--format", cfg.format, "json or csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (!checks.empty()) {
    cfg.checks.clear();
    for (const auto& name : checks) {
      if (name == "all") {
        cfg.checks.insert(all_checks().begin(), all_checks().end());
      } else if (auto c = parse_check(name)) {
        cfg.checks.insert(*c);
      } else {
        std::cerr << "error: unknown check '" << name << "'\n";
        return kExitInput;
      }
    }
  }

  Command command = gen->parsed() ? cmd_generate : run->parsed() ? cmd_run : cmd_report;
  return invoke(command, cfg, std::cout, std::cerr);
}
