#include "circuit_route/router.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "circuit_route/errors.hpp"

namespace circuit_route {

namespace {

// Beyond this counter value the power is taken in the log domain.
constexpr int kDirectPowLimit = 1024;

}  // namespace

const char* to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::arrive:
      return "arrive";
    case RecordKind::depart:
      return "depart";
    case RecordKind::dummy_arrive:
      return "dummy-arrive";
    case RecordKind::dummy_depart:
      return "dummy-depart";
  }
  return "?";
}

Router::Router(const Graph& g)
    : graph_(&g), base_x_(1.0 / (4.0 * g.num_edges())) {
  const auto m = static_cast<std::size_t>(g.num_edges());
  log_lambda_.resize(m);
  count_.assign(m, 0);
  x_.assign(m, base_x_);
  weight_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double c = g.edges()[e].capacity;
    log_lambda_[e] = std::log1p(1.0 / (4.0 * c));
    weight_[e] = base_x_ / c;
  }
}

double Router::lambda(EdgeId e) const { return 1.0 + 1.0 / (4.0 * graph_->capacity(e)); }

int Router::reroutes(RequestId k) const {
  auto it = reroutes_.find(k);
  return it == reroutes_.end() ? 0 : it->second;
}

std::size_t Router::alive_at_arrival(RequestId k) const {
  auto it = alive_at_arrival_.find(k);
  if (it == alive_at_arrival_.end()) throw RoutingError("request " + std::to_string(k) + " never arrived");
  return it->second;
}

void Router::bump(EdgeId e, int delta) {
  const auto i = static_cast<std::size_t>(e);
  const int n = count_[i] += delta;
  if (n < 0) throw std::logic_error("negative path counter on edge " + std::to_string(e));
  x_[i] = n <= kDirectPowLimit ? base_x_ * std::pow(lambda(e), n)
                               : std::exp(std::log(base_x_) + n * log_lambda_[i]);
  weight_[i] = x_[i] / graph_->edges()[i].capacity;
}

double Router::objective() const {
  double p = 0.0;
  for (const auto& [k, a] : alive_) p += a.z;
  for (double x : x_) p += x;
  return p;
}

SubEventRecord Router::route(RequestId k, NodeId s, NodeId d) {
  return do_route(k, s, d, 0, SubStep{last_t_, 0}, RecordKind::arrive);
}

SubEventRecord Router::unroute(RequestId k) {
  return do_unroute(k, SubStep{last_t_, 0}, RecordKind::depart);
}

SubEventRecord Router::do_route(RequestId k, NodeId s, NodeId d, int generation, SubStep when,
                                RecordKind kind) {
  if (alive_.count(k)) throw RoutingError("request " + std::to_string(k) + " is already routed");
  if (!graph_->has_node(s) || !graph_->has_node(d)) {
    throw RoutingError("request " + std::to_string(k) + ": unknown node");
  }
  if (s == d) throw RoutingError("request " + std::to_string(k) + ": source equals destination");

  auto best = ShortestPathTree(*graph_, weight_, s).path_to(d);
  if (!best) {
    throw RoutingError("request " + std::to_string(k) + ": destination " + std::to_string(d) +
                       " unreachable from " + std::to_string(s));
  }
  if (hook_) hook_(s, d, *best);

  SubEventRecord rec;
  rec.when = when;
  rec.kind = kind;
  rec.k = k;
  rec.generation = generation;
  rec.path_weight = best->weight;
  // z uses the weight before the edge update.
  rec.z = 1.0 - 0.5 * best->weight;
  double x_increase = 0.0;
  for (EdgeId e : best->path.edges) {
    const double before = x_value(e);
    bump(e, +1);
    x_increase += x_value(e) - before;
  }
  rec.delta_p = rec.z + x_increase;
  rec.path = best->path;
  alive_.emplace(k, Allocation{s, d, best->path, rec.z, best->weight, generation});
  rec.alive_after = alive_.size();
  rec.p_after = objective();
  return rec;
}

SubEventRecord Router::do_unroute(RequestId k, SubStep when, RecordKind kind) {
  auto it = alive_.find(k);
  if (it == alive_.end()) throw RoutingError("request " + std::to_string(k) + " has no allocation");
  Allocation a = std::move(it->second);
  alive_.erase(it);

  SubEventRecord rec;
  rec.when = when;
  rec.kind = kind;
  rec.k = k;
  rec.generation = a.generation;
  rec.z = a.z;
  rec.path_weight = path_weight(*graph_, weight_, a.path);
  double x_decrease = 0.0;
  for (EdgeId e : a.path.edges) {
    const double before = x_value(e);
    bump(e, -1);
    x_decrease += before - x_value(e);
  }
  rec.delta_p = -a.z - x_decrease;
  rec.path = std::move(a.path);
  rec.alive_after = alive_.size();
  rec.p_after = objective();
  return rec;
}

std::optional<Violation> Router::find_violation() const {
  std::map<NodeId, ShortestPathTree> trees;
  for (const auto& [k, a] : alive_) {
    auto it = trees.find(a.s);
    if (it == trees.end()) it = trees.emplace(a.s, ShortestPathTree(*graph_, weight_, a.s)).first;
    const ShortestPathTree& tree = it->second;
    if (hook_) hook_(a.s, a.d, *tree.path_to(a.d));
    if (a.z + tree.distance(a.d) < 1.0 - kViolationEpsilon) {
      return Violation{k, *tree.path_to(a.d)};
    }
  }
  return std::nullopt;
}

std::size_t Router::reroute_cap() const {
  const auto rounds = static_cast<std::size_t>(std::ceil(std::log2(12.0 * graph_->num_edges())));
  return alive_.size() * rounds + 1;
}

std::vector<Reroute> Router::make_feasible() { return do_make_feasible(last_t_, nullptr); }

std::vector<Reroute> Router::do_make_feasible(std::int64_t t,
                                              std::vector<SubEventRecord>* records) {
  std::vector<Reroute> done;
  const std::size_t cap = reroute_cap();
  int sub = 0;
  while (auto v = find_violation()) {
    if (done.size() >= cap) {
      std::ostringstream os;
      os << "rerouting did not converge after " << done.size() << " reroutes at t=" << t
         << " (last request " << v->k << ")";
      throw std::logic_error(os.str());
    }
    const Allocation& a = alive_.at(v->k);
    const NodeId s = a.s;
    const NodeId d = a.d;
    const int generation = a.generation + 1;
    auto dep = do_unroute(v->k, SubStep{t, ++sub}, RecordKind::dummy_depart);
    auto arr = do_route(v->k, s, d, generation, SubStep{t, ++sub}, RecordKind::dummy_arrive);
    ++reroutes_[v->k];
    done.push_back(Reroute{v->k, dep.path, arr.path});
    if (records != nullptr) {
      records->push_back(std::move(dep));
      records->push_back(std::move(arr));
    }
  }
  return done;
}

StepReport Router::step(const Event& ev) {
  if (steps_ > 0 && ev.t <= last_t_) throw RoutingError("event time does not increase");
  last_t_ = ev.t;
  StepReport report;
  report.event = ev;
  if (ev.kind == EventKind::arrive) {
    if (alive_at_arrival_.count(ev.k)) {
      throw RoutingError("request " + std::to_string(ev.k) + " arrives twice");
    }
    report.records.push_back(do_route(ev.k, ev.s, ev.d, 0, SubStep{ev.t, 0}, RecordKind::arrive));
    alive_at_arrival_[ev.k] = alive_.size();
  } else {
    report.records.push_back(do_unroute(ev.k, SubStep{ev.t, 0}, RecordKind::depart));
    report.reroutes = do_make_feasible(ev.t, &report.records);
  }
  ++steps_;
  for (EdgeId e = 0; e < graph_->num_edges(); ++e) {
    report.max_load = std::max(report.max_load, count_[static_cast<std::size_t>(e)] / graph_->capacity(e));
    report.max_x = std::max(report.max_x, x_value(e));
  }
  return report;
}

void Router::set_z_for_testing(RequestId k, double z) { alive_.at(k).z = z; }

}  // namespace circuit_route
