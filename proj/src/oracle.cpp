#include "circuit_route/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "circuit_route/errors.hpp"

namespace circuit_route {

namespace {

const Path& certified_path(const Graph& g, const Certificate& cert, const Event& ev) {
  auto it = cert.paths.find(ev.k);
  if (it == cert.paths.end()) throw InputError("certificate: no path for request " + std::to_string(ev.k));
  const Path& p = it->second;
  if (p.source != ev.s || p.target != ev.d) {
    throw InputError("certificate: path of request " + std::to_string(ev.k) +
                     " does not join its endpoints");
  }
  check_path(g, p);
  return p;
}

class BranchAndBound {
 public:
  BranchAndBound(const Graph& g, std::vector<std::vector<Path>> choices)
      : g_(g), choices_(std::move(choices)), count_(static_cast<std::size_t>(g.num_edges()), 0) {}

  double solve() {
    search(0, 0.0);
    return best_;
  }

 private:
  void search(std::size_t depth, double current) {
    if (current >= best_) return;
    if (depth == choices_.size()) {
      best_ = current;
      return;
    }
    for (const Path& p : choices_[depth]) {
      double load = current;
      for (EdgeId e : p.edges) {
        const auto i = static_cast<std::size_t>(e);
        ++count_[i];
        load = std::max(load, count_[i] / g_.capacity(e));
      }
      search(depth + 1, load);
      for (EdgeId e : p.edges) --count_[static_cast<std::size_t>(e)];
    }
  }

  const Graph& g_;
  std::vector<std::vector<Path>> choices_;
  std::vector<int> count_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

std::vector<double> certificate_loads(const Graph& g, const Trace& trace, const Certificate& cert) {
  std::vector<int> count(static_cast<std::size_t>(g.num_edges()), 0);
  std::map<RequestId, const Path*> live;
  std::vector<double> loads;
  loads.reserve(trace.events.size());
  for (const Event& ev : trace.events) {
    if (ev.kind == EventKind::arrive) {
      const Path& p = certified_path(g, cert, ev);
      live[ev.k] = &p;
      for (EdgeId e : p.edges) ++count[static_cast<std::size_t>(e)];
    } else {
      auto it = live.find(ev.k);
      if (it == live.end()) throw InputError("trace: request " + std::to_string(ev.k) + " departs before arriving");
      for (EdgeId e : it->second->edges) --count[static_cast<std::size_t>(e)];
      live.erase(it);
    }
    double load = 0.0;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      load = std::max(load, count[static_cast<std::size_t>(e)] / g.capacity(e));
    }
    loads.push_back(load);
  }
  return loads;
}

double verify_certificate(const Graph& g, const Trace& trace, const Certificate& cert) {
  const auto loads = certificate_loads(g, trace, cert);
  return loads.empty() ? 0.0 : *std::max_element(loads.begin(), loads.end());
}

double optimal_nonsplittable_load(const Graph& g, std::span<const Demand> alive,
                                  std::size_t budget) {
  if (alive.empty()) return 0.0;
  std::vector<std::vector<Path>> choices;
  double product = 1.0;
  for (const Demand& d : alive) {
    choices.push_back(enumerate_simple_paths(g, d.s, d.d, budget));
    if (choices.back().empty()) {
      throw InputError("request " + std::to_string(d.k) + ": destination unreachable");
    }
    product *= static_cast<double>(choices.back().size());
    if (product > static_cast<double>(budget)) {
      throw InputError("enumeration budget of " + std::to_string(budget) + " assignments exceeded");
    }
  }
  // Requests with fewer choices first keeps the search tree narrow at the top.
  std::stable_sort(choices.begin(), choices.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return BranchAndBound(g, std::move(choices)).solve();
}

std::vector<double> optimal_loads(const Graph& g, const Trace& trace, std::size_t budget) {
  std::map<RequestId, Demand> live;
  std::map<std::vector<std::pair<NodeId, NodeId>>, double> memo;
  std::vector<double> loads;
  for (const Event& ev : trace.events) {
    if (ev.kind == EventKind::arrive) {
      live[ev.k] = Demand{ev.k, ev.s, ev.d};
    } else {
      live.erase(ev.k);
    }
    std::vector<std::pair<NodeId, NodeId>> key;
    std::vector<Demand> demands;
    for (const auto& [k, d] : live) {
      key.emplace_back(d.s, d.d);
      demands.push_back(d);
    }
    std::sort(key.begin(), key.end());
    auto it = memo.find(key);
    if (it == memo.end()) {
      it = memo.emplace(key, optimal_nonsplittable_load(g, demands, budget)).first;
    }
    loads.push_back(it->second);
  }
  return loads;
}

double LoadProfile::alg_peak() const {
  double peak = 0.0;
  for (const auto& p : points) peak = std::max(peak, p.alg);
  return peak;
}

double LoadProfile::opt_peak() const {
  double peak = 0.0;
  for (const auto& p : points) peak = std::max(peak, p.opt);
  return peak;
}

CompetitiveReport competitive_report(const LoadProfile& profile, int num_edges) {
  CompetitiveReport r;
  r.alg_load = profile.alg_peak();
  r.opt_load = profile.opt_peak();
  if (!(r.opt_load > 0.0)) throw InputError("no load");
  r.ratio = r.alg_load / r.opt_load;
  r.bound = 4.0 * std::log2(12.0 * num_edges);
  r.within_bound = r.ratio <= r.bound;
  r.flagged = r.opt_load <= 1.0 && !r.within_bound;
  return r;
}

}  // namespace circuit_route
