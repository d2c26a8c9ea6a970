// generators.hpp - seeded graph and trace generators.
//
// Every generator is a pure function of its arguments: equal inputs give
// equal outputs on every platform.
#pragma once

#include <cstdint>
#include <utility>

#include "circuit_route/graph.hpp"
#include "circuit_route/trace.hpp"

namespace circuit_route {

struct GraphParams {
  int nodes = 8;
  int edges = 12;
  bool directed = false;
  // Capacities are drawn uniformly from {1, ..., max_capacity}.
  int max_capacity = 3;
};

// Random connected graph (strongly connected when directed): a random
// spanning tree or Hamiltonian cycle plus distinct extra edges.
Graph gen_graph(const GraphParams& params, std::uint64_t seed);

struct PlantedParams {
  int requests = 50;
  // Each request lives for a uniform number of steps in [1, max_duration].
  int max_duration = 40;
  // Cap on simultaneously alive requests; 0 means unlimited.
  int max_alive = 0;
};

// Random arrivals and departures whose planted routing keeps every edge at
// load <= 1 at all times. An arrival that does not fit is deferred: a
// departure is emitted at that step instead.
std::pair<Trace, Certificate> gen_planted(const Graph& g, const PlantedParams& params,
                                          std::uint64_t seed);

// Repeated fill-and-drain bursts between the endpoints of `focus`. Each cycle
// admits as many requests as the planted routing (focus edge plus alternative
// routes) can hold, then departs them all in a seeded random order.
std::pair<Trace, Certificate> gen_churn_stress(const Graph& g, EdgeId focus, int cycles,
                                               std::uint64_t seed);

// First edge whose endpoints are joined by a path avoiding the edge, or -1.
EdgeId find_churn_focus(const Graph& g);

}  // namespace circuit_route
