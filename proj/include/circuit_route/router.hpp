// router.hpp - online virtual-circuit routing with rerouting.
//
// Every edge carries a dual price x_e that is exponential in the number of
// alive paths through it, and every alive request k carries z_k, one minus
// half the price of its path when it was allocated. Arrivals take a lightest
// path under x_e / c_e. After a departure, any alive request j with a path p
// such that z_j + sum_{e in p} x_e / c_e < 1 is rerouted, so the covering
// constraints hold again before the next event.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "circuit_route/graph.hpp"
#include "circuit_route/trace.hpp"

namespace circuit_route {

// Position of a processed sub-event: original events have index 0, the
// reroutes triggered by a departure at time t are (t, 1), (t, 2), ...
struct SubStep {
  std::int64_t t = 0;
  int i = 0;

  bool original() const { return i == 0; }
  auto operator<=>(const SubStep&) const = default;
};

enum class RecordKind { arrive, depart, dummy_arrive, dummy_depart };

const char* to_string(RecordKind kind);
inline bool is_arrival(RecordKind k) { return k == RecordKind::arrive || k == RecordKind::dummy_arrive; }

// One route or unroute, with its effect on the primal objective.
struct SubEventRecord {
  SubStep when;
  RecordKind kind = RecordKind::arrive;
  RequestId k = 0;
  int generation = 0;  // 0 for the original arrival, +1 per reroute
  Path path;
  double z = 0.0;            // z_k set by the arrival or freed by the departure
  double path_weight = 0.0;  // sum x_e/c_e over the path before the update
  double delta_p = 0.0;      // change of sum z + sum x, from the touched terms only
  std::size_t alive_after = 0;
  double p_after = 0.0;      // objective recomputed from the whole state
};

struct Reroute {
  RequestId k = 0;
  Path old_path;
  Path new_path;
};

struct StepReport {
  Event event;
  std::vector<Reroute> reroutes;
  // The original event's record first, then one depart/arrive pair per reroute.
  std::vector<SubEventRecord> records;
  double max_load = 0.0;
  double max_x = 0.0;
};

struct Allocation {
  NodeId s = -1;
  NodeId d = -1;
  Path path;
  double z = 0.0;
  double weight_at_alloc = 0.0;
  int generation = 0;
};

struct Violation {
  RequestId k = 0;
  WeightedPath path;
};

// Absolute dead band on the strict violation test z_j + w(p) < 1.
inline constexpr double kViolationEpsilon = 1e-12;

class Router {
 public:
  explicit Router(const Graph& g);

  const Graph& graph() const { return *graph_; }

  // (1 / 4m) * (1 + 1 / 4c_e)^{n_e}, derived from the integer path counter.
  double x_value(EdgeId e) const { return x_.at(static_cast<std::size_t>(e)); }
  double lambda(EdgeId e) const;
  int path_count(EdgeId e) const { return count_.at(static_cast<std::size_t>(e)); }
  const std::vector<int>& path_counts() const { return count_; }
  // Edge weights x_e / c_e, indexed by edge id.
  std::span<const double> weights() const { return weight_; }

  const std::map<RequestId, Allocation>& alive() const { return alive_; }
  const std::map<RequestId, int>& reroute_counts() const { return reroutes_; }
  int reroutes(RequestId k) const;
  // Number of requests alive right after k originally arrived, k included.
  std::size_t alive_at_arrival(RequestId k) const;
  std::int64_t steps() const { return steps_; }

  // sum_{k alive} z_k + sum_e x_e.
  double objective() const;

  // Allocates a lightest path to k; returns the arrival record.
  SubEventRecord route(RequestId k, NodeId s, NodeId d);
  // Frees k's path and z_k; returns the departure record.
  SubEventRecord unroute(RequestId k);
  // Lowest-numbered alive request whose lightest path violates its covering
  // constraint, with that path.
  std::optional<Violation> find_violation() const;
  // Reroutes until no violation remains.
  std::vector<Reroute> make_feasible();

  // Processes one original event and the reroutes it triggers.
  StepReport step(const Event& ev);

  // Observer for every lightest-path query the router makes.
  using PathQueryHook = std::function<void(NodeId, NodeId, const WeightedPath&)>;
  void set_path_query_hook(PathQueryHook hook) { hook_ = std::move(hook); }

  // Overwrites z_k of an alive request. For fault-injection tests.
  void set_z_for_testing(RequestId k, double z);

 private:
  SubEventRecord do_route(RequestId k, NodeId s, NodeId d, int generation, SubStep when,
                          RecordKind kind);
  SubEventRecord do_unroute(RequestId k, SubStep when, RecordKind kind);
  std::vector<Reroute> do_make_feasible(std::int64_t t, std::vector<SubEventRecord>* records);
  void bump(EdgeId e, int delta);
  std::size_t reroute_cap() const;

  const Graph* graph_;
  double base_x_;
  std::vector<double> log_lambda_;
  std::vector<int> count_;
  std::vector<double> x_;
  std::vector<double> weight_;
  std::map<RequestId, Allocation> alive_;
  std::map<RequestId, int> reroutes_;
  std::map<RequestId, std::size_t> alive_at_arrival_;
  std::int64_t steps_ = 0;
  std::int64_t last_t_ = 0;
  PathQueryHook hook_;
};

}  // namespace circuit_route
