#include "circuit_route/generators.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "circuit_route/errors.hpp"
#include "circuit_route/rng.hpp"

namespace circuit_route {

namespace {

constexpr int kPoolSize = 4;
constexpr int kPlacementAttempts = 32;
constexpr double kForbidden = 1e12;

// Up to kPoolSize distinct s->d paths, found by repeated lightest-path search
// where edges already in the pool are penalized. Edges in `avoid` are never
// used.
std::vector<Path> path_pool(const Graph& g, NodeId s, NodeId d, EdgeId avoid = -1) {
  std::vector<Path> pool;
  std::vector<double> weight(static_cast<std::size_t>(g.num_edges()), 1.0);
  if (avoid >= 0) weight[static_cast<std::size_t>(avoid)] = kForbidden;
  for (int round = 0; round < kPoolSize; ++round) {
    auto best = lightest_path(g, weight, s, d);
    if (!best || best->weight >= kForbidden) break;
    if (std::find(pool.begin(), pool.end(), best->path) != pool.end()) break;
    for (EdgeId e : best->path.edges) weight[static_cast<std::size_t>(e)] += 4.0;
    pool.push_back(std::move(best->path));
  }
  return pool;
}

// Planted per-edge path counts; a path fits while every edge stays <= c_e.
class PlantedLoad {
 public:
  explicit PlantedLoad(const Graph& g) : g_(g), count_(static_cast<std::size_t>(g.num_edges()), 0) {}

  bool fits(const Path& p) const {
    return std::all_of(p.edges.begin(), p.edges.end(), [&](EdgeId e) {
      return count_[static_cast<std::size_t>(e)] + 1 <= g_.capacity(e);
    });
  }
  void add(const Path& p) {
    for (EdgeId e : p.edges) ++count_[static_cast<std::size_t>(e)];
  }
  void remove(const Path& p) {
    for (EdgeId e : p.edges) --count_[static_cast<std::size_t>(e)];
  }

 private:
  const Graph& g_;
  std::vector<int> count_;
};

const Path* first_fit(const std::vector<Path>& pool, const PlantedLoad& load) {
  for (const Path& p : pool) {
    if (load.fits(p)) return &p;
  }
  return nullptr;
}

}  // namespace

Graph gen_graph(const GraphParams& params, std::uint64_t seed) {
  const int n = params.nodes;
  const int m = params.edges;
  if (n < 2) throw InputError("generator: need at least 2 nodes");
  if (params.max_capacity < 1) throw InputError("generator: max capacity must be at least 1");
  const long long pairs = params.directed ? 1LL * n * (n - 1) : 1LL * n * (n - 1) / 2;
  const int base = params.directed ? n : n - 1;
  if (m < base) {
    throw InputError("generator: need at least " + std::to_string(base) + " edges for " +
                     std::to_string(n) + " nodes");
  }
  if (m > pairs) throw InputError("generator: more edges than node pairs");

  Rng rng(seed);
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);

  std::vector<std::pair<NodeId, NodeId>> ends;
  std::set<std::pair<NodeId, NodeId>> used;
  auto key = [&](NodeId u, NodeId v) {
    return params.directed ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
  };
  auto add = [&](NodeId u, NodeId v) {
    ends.emplace_back(u, v);
    used.insert(key(u, v));
  };

  if (params.directed) {
    for (int i = 0; i < n; ++i) {
      add(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>((i + 1) % n)]);
    }
  } else {
    for (int i = 1; i < n; ++i) {
      NodeId parent = order[rng.below(static_cast<std::uint64_t>(i))];
      add(parent, order[static_cast<std::size_t>(i)]);
    }
  }
  while (static_cast<int>(ends.size()) < m) {
    auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    auto v = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    if (u == v || used.count(key(u, v))) continue;
    add(u, v);
  }

  RawGraph raw;
  raw.directed = params.directed;
  raw.node_count = n;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    const auto cap = static_cast<double>(rng.between(1, params.max_capacity));
    raw.edges.push_back({static_cast<std::int64_t>(i), ends[i].first, ends[i].second, cap});
  }
  return validate_graph(raw);
}

std::pair<Trace, Certificate> gen_planted(const Graph& g, const PlantedParams& params,
                                          std::uint64_t seed) {
  if (params.requests < 0 || params.max_duration < 1 || params.max_alive < 0) {
    throw InputError("generator: bad planted parameters");
  }
  Rng rng(seed);
  Trace trace;
  Certificate cert;
  PlantedLoad load(g);
  std::map<std::pair<NodeId, NodeId>, std::vector<Path>> pools;
  std::set<std::pair<std::int64_t, RequestId>> schedule;  // (due time, request)

  const auto n = static_cast<std::uint64_t>(g.num_nodes());
  std::int64_t t = 0;
  RequestId next = 1;
  int arrived = 0;

  auto depart_earliest = [&] {
    auto it = schedule.begin();
    const RequestId k = it->second;
    schedule.erase(it);
    load.remove(cert.paths.at(k));
    trace.events.push_back(Event::departure(t, k));
  };

  while (arrived < params.requests || !schedule.empty()) {
    const bool saturated = params.max_alive > 0 &&
                           schedule.size() >= static_cast<std::size_t>(params.max_alive);
    if (!schedule.empty() &&
        (arrived == params.requests || schedule.begin()->first <= t || saturated)) {
      depart_earliest();
      ++t;
      continue;
    }

    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      auto s = static_cast<NodeId>(rng.below(n));
      auto d = static_cast<NodeId>(rng.below(n));
      if (s == d) continue;
      auto [it, fresh] = pools.try_emplace({s, d});
      if (fresh) it->second = path_pool(g, s, d);
      const Path* p = first_fit(it->second, load);
      if (p == nullptr) continue;
      const RequestId k = next++;
      load.add(*p);
      cert.paths.emplace(k, *p);
      trace.events.push_back(Event::arrival(t, k, s, d));
      schedule.emplace(t + rng.between(1, params.max_duration), k);
      ++arrived;
      placed = true;
    }
    if (!placed) {
      if (schedule.empty()) throw InputError("generator: cannot place any request");
      depart_earliest();
    }
    ++t;
  }
  return {std::move(trace), std::move(cert)};
}

EdgeId find_churn_focus(const Graph& g) {
  for (const Edge& e : g.edges()) {
    if (path_pool(g, e.u, e.v, e.id).size() > 0) return e.id;
  }
  return -1;
}

std::pair<Trace, Certificate> gen_churn_stress(const Graph& g, EdgeId focus, int cycles,
                                               std::uint64_t seed) {
  if (focus < 0 || focus >= g.num_edges()) throw InputError("generator: unknown focus edge");
  if (cycles < 0) throw InputError("generator: negative cycle count");
  const Edge& fe = g.edge(focus);
  std::vector<Path> pool{Path{{focus}, fe.u, fe.v}};
  for (Path& alt : path_pool(g, fe.u, fe.v, focus)) pool.push_back(std::move(alt));
  if (pool.size() < 2) {
    throw InputError("generator: focus edge " + std::to_string(focus) + " has no alternative route");
  }

  Rng rng(seed);
  Trace trace;
  Certificate cert;
  PlantedLoad load(g);
  std::int64_t t = 0;
  RequestId next = 1;
  for (int c = 0; c < cycles; ++c) {
    std::vector<RequestId> burst;
    while (const Path* p = first_fit(pool, load)) {
      const RequestId k = next++;
      load.add(*p);
      cert.paths.emplace(k, *p);
      trace.events.push_back(Event::arrival(t++, k, fe.u, fe.v));
      burst.push_back(k);
    }
    rng.shuffle(burst);
    for (RequestId k : burst) {
      load.remove(cert.paths.at(k));
      trace.events.push_back(Event::departure(t++, k));
    }
  }
  return {std::move(trace), std::move(cert)};
}

}  // namespace circuit_route
