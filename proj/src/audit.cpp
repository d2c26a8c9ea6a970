#include "circuit_route/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "circuit_route/errors.hpp"
#include "json.hpp"

namespace circuit_route {

// ---------------------------------------------------------------------------
// Ledger

void AuditLedger::append(const StepReport& report) {
  for (const SubEventRecord& rec : report.records) append(rec);
}

void AuditLedger::append(const SubEventRecord& rec) {
  const auto key = std::pair{rec.k, rec.generation};
  if (is_arrival(rec.kind)) {
    if (open_.count(key)) throw std::invalid_argument("incarnation arrives twice");
    open_[key] = incarnations_.size();
    incarnations_.push_back(Incarnation{rec.k, rec.generation, records_.size(), std::nullopt});
  } else {
    auto it = open_.find(key);
    if (it == open_.end()) {
      throw std::invalid_argument("unmatched departure record for request " + std::to_string(rec.k));
    }
    Incarnation& inc = incarnations_[it->second];
    inc.depart_record = records_.size();
    dead_pair_total_ += records_[inc.arrive_record].delta_p + rec.delta_p;
    open_.erase(it);
    ++dead_;
  }
  records_.push_back(rec);
}

double check_dead_pair_sum(const AuditLedger& ledger, std::int64_t t) {
  const auto& records = ledger.records();
  double sum = 0.0;
  for (const Incarnation& inc : ledger.incarnations()) {
    if (!inc.depart_record) continue;
    const SubEventRecord& arr = records.at(inc.arrive_record);
    const SubEventRecord& dep = records.at(*inc.depart_record);
    if (!is_arrival(arr.kind) || is_arrival(dep.kind) || arr.k != dep.k ||
        arr.generation != dep.generation) {
      throw std::invalid_argument("unmatched departure record for request " + std::to_string(inc.k));
    }
    if (dep.when.t < t) sum += arr.delta_p + dep.delta_p;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// LP checks

double primal_value(const Router& router) {
  double p = 0.0;
  for (const auto& [k, a] : router.alive()) p += a.z;
  for (EdgeId e = 0; e < router.graph().num_edges(); ++e) p += router.x_value(e);
  return p;
}

FeasibilityReport check_primal_feasible(const Router& router, double tol) {
  const Graph& g = router.graph();
  std::vector<double> weight(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    weight[static_cast<std::size_t>(e)] = router.x_value(e) / g.capacity(e);
  }

  FeasibilityReport report;
  report.worst_slack = std::numeric_limits<double>::infinity();
  std::map<NodeId, ShortestPathTree> trees;
  for (const auto& [k, a] : router.alive()) {
    auto it = trees.find(a.s);
    if (it == trees.end()) it = trees.emplace(a.s, ShortestPathTree(g, weight, a.s)).first;
    const double slack = a.z + it->second.distance(a.d) - 1.0;
    report.worst_slack = std::min(report.worst_slack, slack);
    if (slack < -tol) report.violators.emplace_back(k, slack);
  }
  report.pass = report.violators.empty();
  return report;
}

bool check_weak_duality(const Router& router, double tol) {
  return primal_value(router) >= static_cast<double>(router.alive().size()) - tol;
}

bool check_dual_assignment(const Graph& g, std::span<const Demand> alive,
                           std::span<const PathShare> shares, double tol) {
  std::map<RequestId, const Demand*> by_id;
  for (const Demand& d : alive) by_id[d.k] = &d;

  std::vector<double> edge_flow(static_cast<std::size_t>(g.num_edges()), 0.0);
  std::map<RequestId, double> demand_met;
  for (const PathShare& share : shares) {
    if (share.fraction < 0.0) throw InputError("negative path fraction");
    auto it = by_id.find(share.k);
    if (it == by_id.end()) throw InputError("share for request " + std::to_string(share.k) + " not alive");
    if (share.path.source != it->second->s || share.path.target != it->second->d) {
      throw InputError("path does not join the endpoints of request " + std::to_string(share.k));
    }
    check_path(g, share.path);
    for (EdgeId e : share.path.edges) edge_flow[static_cast<std::size_t>(e)] += share.fraction;
    demand_met[share.k] += share.fraction;
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (edge_flow[static_cast<std::size_t>(e)] / g.capacity(e) > 1.0 + tol) return false;
  }
  for (const Demand& d : alive) {
    if (std::abs(demand_met[d.k] - 1.0) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Auditor

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks{
      Check::counters,        Check::x_cap,         Check::load_bound, Check::reroute_bound,
      Check::reroute_alive,   Check::primal_feasible, Check::arrival_delta, Check::dead_pair,
      Check::weak_duality,    Check::ledger,        Check::reroute_halving,
  };
  return checks;
}

const char* check_name(Check c) {
  switch (c) {
    case Check::counters:
      return "counters";
    case Check::x_cap:
      return "x-cap";
    case Check::load_bound:
      return "load-bound";
    case Check::reroute_bound:
      return "reroute-bound";
    case Check::reroute_alive:
      return "reroute-alive";
    case Check::primal_feasible:
      return "primal-feasible";
    case Check::arrival_delta:
      return "arrival-delta";
    case Check::dead_pair:
      return "dead-pair";
    case Check::weak_duality:
      return "weak-duality";
    case Check::ledger:
      return "ledger";
    case Check::reroute_halving:
      return "reroute-halving";
  }
  return "?";
}

std::optional<Check> parse_check(const std::string& name) {
  for (Check c : all_checks()) {
    if (name == check_name(c)) return c;
  }
  return std::nullopt;
}

Auditor::Auditor(const Graph& g, AuditOptions options)
    : graph_(&g), options_(std::move(options)), log_bound_(std::log2(12.0 * g.num_edges())) {
  for (Check c : all_checks()) {
    CheckResult r;
    r.check = c;
    r.enabled = on(c);
    r.worst_slack = std::numeric_limits<double>::infinity();
    results_.push_back(r);
  }
}

const CheckResult& Auditor::result(Check c) const {
  return results_.at(static_cast<std::size_t>(c));
}

bool Auditor::all_pass() const {
  return std::all_of(results_.begin(), results_.end(), [](const CheckResult& r) { return r.pass; });
}

void Auditor::record(Check c, double slack, bool ok, SubStep at) {
  CheckResult& r = results_[static_cast<std::size_t>(c)];
  ++r.evaluations;
  if (!r.worst_at || slack < r.worst_slack) {
    r.worst_slack = slack;
    r.worst_at = at;
  }
  if (!ok) {
    ++r.failures;
    r.pass = false;
    if (!r.first_failure) r.first_failure = at;
  }
}

void Auditor::begin(const Router& router) { check_state(router, SubStep{-1, 0}); }

void Auditor::observe(const Router& router, const StepReport& report) {
  for (const SubEventRecord& rec : report.records) {
    ledger_.append(rec);
    check_record(router, rec);
  }
  check_state(router, SubStep{report.event.t, 0});
}

void Auditor::finish(const Router& router) {
  if (!on(Check::ledger)) return;
  const auto& records = ledger_.records();
  double total = AuditLedger::kInitialObjective;
  for (const auto& rec : records) total += rec.delta_p;
  const double scale = options_.tol * static_cast<double>(std::max<std::size_t>(1, records.size()));
  const double p = primal_value(router);
  const double last = records.empty() ? AuditLedger::kInitialObjective : records.back().p_after;
  const double err = std::max(std::abs(total - p), std::abs(last - p));
  const SubStep at = records.empty() ? SubStep{-1, 0} : records.back().when;
  record(Check::ledger, scale - err, err <= scale, at);
}

void Auditor::check_record(const Router& router, const SubEventRecord& rec) {
  const double tol = options_.tol;
  if (on(Check::ledger)) {
    const double err = std::abs(rec.p_after - (last_p_ + rec.delta_p));
    record(Check::ledger, tol - err, err <= tol, rec.when);
  }
  last_p_ = rec.p_after;

  if (is_arrival(rec.kind)) {
    if (on(Check::arrival_delta)) {
      const double margin = 1.0 - rec.delta_p;
      const double err = std::abs(margin - 0.25 * rec.path_weight);
      record(Check::arrival_delta, std::min(margin, tol - err), rec.delta_p < 1.0 && err <= tol,
             rec.when);
    }
    if (rec.kind == RecordKind::dummy_arrive && on(Check::reroute_halving)) {
      // The allocation-time weight 1 - z must at least halve on every reroute.
      const double z_old = last_depart_z_.at(rec.k);
      const double slack = 0.5 * (1.0 - z_old) - (1.0 - rec.z);
      record(Check::reroute_halving, slack, slack > -tol, rec.when);
    }
    if (rec.kind == RecordKind::dummy_arrive) {
      const int count = ++reroutes_seen_[rec.k];
      if (on(Check::reroute_bound)) {
        const double slack = std::floor(log_bound_) - count;
        record(Check::reroute_bound, slack, slack >= 0, rec.when);
      }
      if (on(Check::reroute_alive)) {
        const double slack = static_cast<double>(router.alive_at_arrival(rec.k)) - count;
        record(Check::reroute_alive, slack, slack >= 0, rec.when);
      }
    }
  } else {
    last_depart_z_[rec.k] = rec.z;
  }
}

void Auditor::check_state(const Router& router, SubStep at) {
  const Graph& g = *graph_;
  const double tol = options_.tol;

  if (on(Check::counters)) {
    std::vector<int> recount(static_cast<std::size_t>(g.num_edges()), 0);
    for (const auto& [k, a] : router.alive()) {
      for (EdgeId e : a.path.edges) ++recount[static_cast<std::size_t>(e)];
    }
    bool ok = recount == router.path_counts();
    record(Check::counters, ok ? 0.0 : -1.0, ok, at);
  }

  double max_x = 0.0;
  double load_slack = std::numeric_limits<double>::infinity();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    max_x = std::max(max_x, router.x_value(e));
    load_slack = std::min(load_slack, 4.0 * g.capacity(e) * log_bound_ - router.path_count(e));
  }
  max_x_ = std::max(max_x_, max_x);
  if (on(Check::x_cap)) record(Check::x_cap, 3.0 - max_x, max_x <= 3.0, at);
  if (on(Check::load_bound)) record(Check::load_bound, load_slack, load_slack >= 0.0, at);

  if (on(Check::primal_feasible) && !router.alive().empty()) {
    FeasibilityReport f = check_primal_feasible(router, tol);
    record(Check::primal_feasible, f.worst_slack, f.pass, at);
  }
  if (on(Check::weak_duality)) {
    const double slack = primal_value(router) - static_cast<double>(router.alive().size());
    record(Check::weak_duality, slack, slack >= -tol, at);
  }
  if (on(Check::dead_pair)) {
    const double allowed = tol * static_cast<double>(ledger_.dead_count());
    const double sum = ledger_.dead_pair_total();
    record(Check::dead_pair, allowed - sum, sum <= allowed, at);
  }
}

std::string Auditor::to_json() const {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = kFormatTag;
  doc["pass"] = all_pass();
  doc["tolerance"] = options_.tol;
  auto checks = ordered_json::array();
  for (const CheckResult& r : results_) {
    ordered_json c;
    c["name"] = check_name(r.check);
    c["enabled"] = r.enabled;
    c["pass"] = r.pass;
    c["evaluations"] = r.evaluations;
    c["failures"] = r.failures;
    if (r.evaluations > 0) {
      c["worst_slack"] = r.worst_slack;
      c["worst_at"] = {{"t", r.worst_at->t}, {"i", r.worst_at->i}};
    } else {
      c["worst_slack"] = nullptr;
      c["worst_at"] = nullptr;
    }
    if (r.first_failure) {
      c["first_failure"] = {{"t", r.first_failure->t}, {"i", r.first_failure->i}};
    }
    checks.push_back(c);
  }
  doc["checks"] = checks;
  return doc.dump(2) + "\n";
}

}  // namespace circuit_route
