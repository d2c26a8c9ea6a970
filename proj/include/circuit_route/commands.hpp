// commands.hpp - the generate / run / report subcommands.
//
// Exit codes: 0 when every enabled check passes, 1 on an invariant failure,
// 2 on usage or input errors.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

#include "circuit_route/audit.hpp"
#include "circuit_route/oracle.hpp"

namespace circuit_route {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  std::string graph_path;
  std::string trace_path;
  std::string cert_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::set<Check> checks{all_checks().begin(), all_checks().end()};
  double tol = 1e-9;
  std::string format = "json";  // report output: json or csv

  // generate
  std::string kind = "planted";  // planted or churn
  int nodes = 8;
  int edges = 12;
  bool directed = false;
  int max_capacity = 3;
  int requests = 50;
  int max_duration = 40;
  int max_alive = 0;
  int cycles = 100;
  int focus = -1;

  // report
  bool oracle = false;
  std::size_t budget = kDefaultEnumerationBudget;
};

// Throws InputError when the configuration is unusable.
void validate_config(const RunConfig& config);

// Writes graph.json (unless --graph was given), trace.jsonl and cert.json.
int cmd_generate(const RunConfig& config, std::ostream& out);
// Replays the trace, audits it, writes metrics.json and audit.json.
int cmd_run(const RunConfig& config, std::ostream& out);
// Competitive report from run artifacts: report.json, or report.csv,
// edge_loads.csv and reroutes.csv.
int cmd_report(const RunConfig& config, std::ostream& out);

using Command = int (*)(const RunConfig&, std::ostream&);

// Runs a command, mapping input errors to exit 2 and internal defects to 1.
int invoke(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace circuit_route
