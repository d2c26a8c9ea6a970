#pragma once

#include <initializer_list>
#include <optional>
#include <tuple>
#include <span>
#include <vector>

#include "circuit_route/audit.hpp"
#include "circuit_route/graph.hpp"
#include "circuit_route/router.hpp"
#include "circuit_route/trace.hpp"

namespace circuit_route::testing {

// Edges given as (u, v, capacity); ids follow list order.
inline Graph make_graph(int nodes, std::initializer_list<std::tuple<int, int, double>> edges,
                        bool directed = true) {
  RawGraph raw;
  raw.directed = directed;
  raw.node_count = nodes;
  std::int64_t id = 0;
  for (const auto& [u, v, c] : edges) raw.edges.push_back({id++, u, v, c});
  return validate_graph(raw);
}

// Two parallel 0->1 edges of capacity 1 plus a 1->2->0 return path that no
// 0->1 request can use (m = 4).
inline Graph reroute_fixture() {
  return make_graph(3, {{0, 1, 1.0}, {0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
}

// Arrivals r1..r9 from 0 to 1, then departures of r2, r4, r6, r8. The last
// departure makes edge 1 light enough that r9 (allocated at weight
// lambda^4 / 16) moves over.
inline Trace reroute_trace() {
  Trace t;
  std::int64_t time = 0;
  for (RequestId k = 1; k <= 9; ++k) t.events.push_back(Event::arrival(time++, k, 0, 1));
  for (RequestId k : {2, 4, 6, 8}) t.events.push_back(Event::departure(time++, k));
  return t;
}

// A direct unit-capacity edge 0-1 plus `detours` disjoint 0..1 paths of
// `len` edges each. The online router stacks requests on the direct edge
// until the detours look cheaper, so draining a burst forces reroutes.
inline Graph fan_graph(int detours, int len, double detour_cap) {
  RawGraph raw;
  raw.directed = false;
  std::int64_t id = 0;
  NodeId next = 2;
  raw.edges.push_back({id++, 0, 1, 1.0});
  for (int k = 0; k < detours; ++k) {
    NodeId prev = 0;
    for (int j = 0; j + 1 < len; ++j) {
      raw.edges.push_back({id++, prev, next, detour_cap});
      prev = next++;
    }
    raw.edges.push_back({id++, prev, 1, detour_cap});
  }
  raw.node_count = next;
  return validate_graph(raw);
}

// Brute-force lightest path: every simple path, ordered by the same strict
// tie-break as lightest_path.
inline std::optional<WeightedPath> enumerated_min(const Graph& g, std::span<const double> w,
                                                  NodeId s, NodeId d) {
  std::optional<WeightedPath> best;
  for (Path& p : enumerate_simple_paths(g, s, d, 100000)) {
    WeightedPath wp{p, path_weight(g, w, p)};
    if (!best || lighter(wp, *best)) best = wp;
  }
  return best;
}

struct Replay {
  std::vector<StepReport> reports;
  bool pass = true;
};

inline Replay replay(Router& router, Auditor& auditor, const Trace& trace) {
  Replay r;
  auditor.begin(router);
  for (const Event& ev : trace.events) {
    r.reports.push_back(router.step(ev));
    auditor.observe(router, r.reports.back());
  }
  auditor.finish(router);
  r.pass = auditor.all_pass();
  return r;
}

}  // namespace circuit_route::testing
