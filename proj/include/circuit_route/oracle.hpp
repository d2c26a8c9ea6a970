// oracle.hpp - offline ground truth for small instances and competitive ratios.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "circuit_route/audit.hpp"
#include "circuit_route/graph.hpp"
#include "circuit_route/trace.hpp"

namespace circuit_route {

// Replays the trace with the planted routing and returns the largest
// paths/capacity ratio of any edge at any time. Throws InputError on a
// missing path or one whose endpoints do not match its request.
double verify_certificate(const Graph& g, const Trace& trace, const Certificate& cert);

// Planted load after each event of the trace (same validation as above).
std::vector<double> certificate_loads(const Graph& g, const Trace& trace, const Certificate& cert);

inline constexpr std::size_t kDefaultEnumerationBudget = 1'000'000;

// Minimum over all joint single-path assignments of max_e paths(e) / c_e,
// by depth-first branch and bound. Zero for an empty set. Throws InputError
// when the product of path-set sizes exceeds `budget`.
double optimal_nonsplittable_load(const Graph& g, std::span<const Demand> alive,
                                  std::size_t budget = kDefaultEnumerationBudget);

// Enumerated optimum for the alive set after each event of the trace.
std::vector<double> optimal_loads(const Graph& g, const Trace& trace,
                                  std::size_t budget = kDefaultEnumerationBudget);

// Loads at original-event times: the online allocation against a reference
// (planted certificate or enumerated optimum).
struct LoadProfile {
  struct Point {
    std::int64_t t = 0;
    double alg = 0.0;
    double opt = 0.0;
  };
  std::vector<Point> points;

  double alg_peak() const;
  double opt_peak() const;
};

struct CompetitiveReport {
  double alg_load = 0.0;
  double opt_load = 0.0;
  double ratio = 0.0;
  double bound = 0.0;       // 4 * log2(12 m)
  bool within_bound = true;
  bool flagged = false;     // reference load <= 1 and ratio above the bound
};

// Throws InputError("no load") when the reference load is zero.
CompetitiveReport competitive_report(const LoadProfile& profile, int num_edges);

}  // namespace circuit_route
