// audit.hpp - covering/packing LP bookkeeping and invariant checks for runs of
// the online router.
//
// The covering program at time t has a variable x_e >= 0 per edge and a free
// variable z_k per alive request, with one constraint per alive request and
// path: z_k + sum_{e in p} x_e / c_e >= 1. Its objective is
// P = sum_k z_k + sum_e x_e. The packing program routes a unit fraction of
// every alive request within capacity; when feasible its value is |Alive|.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circuit_route/graph.hpp"
#include "circuit_route/router.hpp"

namespace circuit_route {

// ---------------------------------------------------------------------------
// Ledger

// One lifetime of a request between a route and the matching unroute. A
// reroute ends one incarnation and starts the next.
struct Incarnation {
  RequestId k = 0;
  int generation = 0;
  std::size_t arrive_record = 0;
  std::optional<std::size_t> depart_record;
};

// Append-only log of every processed sub-event.
class AuditLedger {
 public:
  // Objective of the empty prefix: m * 1/(4m).
  static constexpr double kInitialObjective = 0.25;

  void append(const StepReport& report);
  // Throws std::invalid_argument on a departure with no open incarnation.
  void append(const SubEventRecord& record);

  const std::vector<SubEventRecord>& records() const { return records_; }
  const std::vector<Incarnation>& incarnations() const { return incarnations_; }
  std::size_t dead_count() const { return dead_; }
  // Running sum of arrival + departure delta P over closed incarnations.
  double dead_pair_total() const { return dead_pair_total_; }

 private:
  std::vector<SubEventRecord> records_;
  std::vector<Incarnation> incarnations_;
  std::map<std::pair<RequestId, int>, std::size_t> open_;
  std::size_t dead_ = 0;
  double dead_pair_total_ = 0.0;
};

// Sum of (arrival delta P + departure delta P) over every incarnation whose
// departure happened before time t. Throws std::invalid_argument if a
// departure record has no matching arrival.
double check_dead_pair_sum(const AuditLedger& ledger, std::int64_t t);

// ---------------------------------------------------------------------------
// LP checks

double primal_value(const Router& router);

struct FeasibilityReport {
  bool pass = true;
  // Min over alive k of z_k + lightest weight - 1; +inf when nothing is alive.
  double worst_slack = 0.0;
  std::vector<std::pair<RequestId, double>> violators;
};

// Covering constraints of every alive request against its lightest path.
FeasibilityReport check_primal_feasible(const Router& router, double tol);

// P >= |Alive| - tol.
bool check_weak_duality(const Router& router, double tol);

struct Demand {
  RequestId k = 0;
  NodeId s = -1;
  NodeId d = -1;
};

struct PathShare {
  RequestId k = 0;
  Path path;
  double fraction = 0.0;
};

// Capacity and demand constraints of the packing program for an explicit
// fractional routing. Throws InputError when a path does not join its
// request's endpoints or a fraction is negative.
bool check_dual_assignment(const Graph& g, std::span<const Demand> alive,
                           std::span<const PathShare> shares, double tol);

// ---------------------------------------------------------------------------
// Interval pairing

struct Interval {
  std::int64_t alpha = 0;
  std::int64_t beta = 0;
};

// Number of intervals containing point t (closed intervals).
std::size_t cut(std::span<const Interval> intervals, std::int64_t t);

// Permutation pi with cut(alpha_j) == cut(beta_{pi[j]}) for every j.
// Built by repeatedly retiring a minimal interval (pi[m] = m) or, when none
// exists, merging the crossing pair alpha_j < alpha_i < beta_j < beta_i that
// minimizes beta_j - alpha_i (pi[i] = j). Throws InputError if two intervals
// share an endpoint or an interval is empty.
std::vector<std::size_t> interval_permutation(std::span<const Interval> intervals);

// Brute-force check of the cut equalities.
bool verify_interval_permutation(std::span<const Interval> intervals,
                                 std::span<const std::size_t> pi);

// ---------------------------------------------------------------------------
// Auditor

enum class Check {
  counters,
  x_cap,
  load_bound,
  reroute_bound,
  reroute_alive,
  primal_feasible,
  arrival_delta,
  dead_pair,
  weak_duality,
  ledger,
  reroute_halving,
};

const std::vector<Check>& all_checks();
const char* check_name(Check c);
std::optional<Check> parse_check(const std::string& name);

struct AuditOptions {
  std::set<Check> enabled{all_checks().begin(), all_checks().end()};
  double tol = 1e-9;
};

struct CheckResult {
  Check check = Check::counters;
  bool enabled = true;
  bool pass = true;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
  // Smallest observed margin to the check's threshold; negative means the
  // threshold was crossed.
  double worst_slack = 0.0;
  std::optional<SubStep> worst_at;
  std::optional<SubStep> first_failure;
};

// Runs the enabled checks on the router state after every original event and
// on every sub-event record. Feed it the initial state, then each StepReport.
class Auditor {
 public:
  Auditor(const Graph& g, AuditOptions options);

  void begin(const Router& router);
  void observe(const Router& router, const StepReport& report);
  void finish(const Router& router);

  bool all_pass() const;
  const std::vector<CheckResult>& results() const { return results_; }
  const CheckResult& result(Check c) const;
  const AuditLedger& ledger() const { return ledger_; }
  double max_x() const { return max_x_; }

  std::string to_json() const;

 private:
  bool on(Check c) const { return options_.enabled.count(c) > 0; }
  void record(Check c, double slack, bool ok, SubStep at);
  void check_state(const Router& router, SubStep at);
  void check_record(const Router& router, const SubEventRecord& rec);

  const Graph* graph_;
  AuditOptions options_;
  std::vector<CheckResult> results_;
  AuditLedger ledger_;
  double log_bound_;  // log2(12 m)
  double last_p_ = AuditLedger::kInitialObjective;
  double max_x_ = 0.0;
  std::map<RequestId, double> last_depart_z_;
  std::map<RequestId, int> reroutes_seen_;
};

}  // namespace circuit_route
