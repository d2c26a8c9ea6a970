#include <algorithm>
#include <cmath>
#include <functional>

#include "circuit_route/errors.hpp"
#include "circuit_route/generators.hpp"
#include "circuit_route/oracle.hpp"
#include "circuit_route/rng.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace circuit_route;
using circuit_route::testing::make_graph;

namespace {

// Plain exhaustive search over all joint assignments.
double exhaustive_load(const Graph& g, const std::vector<Demand>& alive) {
  std::vector<std::vector<Path>> options;
  for (const Demand& d : alive) options.push_back(enumerate_simple_paths(g, d.s, d.d, 1000));
  std::vector<int> count(static_cast<std::size_t>(g.num_edges()), 0);
  double best = INFINITY;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == options.size()) {
      double load = 0.0;
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        load = std::max(load, count[static_cast<std::size_t>(e)] / g.capacity(e));
      }
      best = std::min(best, load);
      return;
    }
    for (const Path& p : options[i]) {
      for (EdgeId e : p.edges) ++count[static_cast<std::size_t>(e)];
      go(i + 1);
      for (EdgeId e : p.edges) --count[static_cast<std::size_t>(e)];
    }
  };
  go(0);
  return alive.empty() ? 0.0 : best;
}

}  // namespace

TEST_CASE("verify_certificate") {
  Graph g = make_graph(2, {{0, 1, 2.0}});
  CHECK(verify_certificate(g, Trace{}, Certificate{}) == 0.0);

  Trace t;
  t.events = {Event::arrival(0, 1, 0, 1), Event::departure(1, 1)};
  Certificate cert;
  cert.paths[1] = Path{{0}, 0, 1};
  CHECK(verify_certificate(g, t, cert) == 0.5);
  CHECK(certificate_loads(g, t, cert) == std::vector<double>{0.5, 0.0});

  CHECK_THROWS_AS(verify_certificate(g, t, Certificate{}), InputError);
  Certificate reversed;
  reversed.paths[1] = Path{{0}, 1, 0};
  CHECK_THROWS_AS(verify_certificate(g, t, reversed), InputError);
}

TEST_CASE("optimal loads on two parallel unit edges") {
  Graph g = make_graph(2, {{0, 1, 1.0}, {0, 1, 1.0}});
  Trace t;
  t.events = {Event::arrival(0, 1, 0, 1), Event::arrival(1, 2, 0, 1), Event::arrival(2, 3, 0, 1)};
  CHECK(optimal_loads(g, t) == std::vector<double>{1.0, 1.0, 2.0});
  CHECK(optimal_nonsplittable_load(g, {}) == 0.0);
}

TEST_CASE("optimal_nonsplittable_load budget") {
  Graph g = make_graph(2, {{0, 1, 1.0}, {0, 1, 1.0}, {0, 1, 1.0}});
  std::vector<Demand> alive;
  for (RequestId k = 1; k <= 8; ++k) alive.push_back({k, 0, 1});
  CHECK_THROWS_AS(optimal_nonsplittable_load(g, alive, 1000), InputError);
  CHECK(optimal_nonsplittable_load(g, alive, 10000) == 3.0);
}

TEST_CASE("branch and bound matches exhaustive search") {
  Rng rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GraphParams gp{static_cast<int>(rng.between(3, 5)), 0, rng.below(2) == 0, 3};
    const int base = gp.directed ? gp.nodes : gp.nodes - 1;
    const int pairs = gp.directed ? gp.nodes * (gp.nodes - 1) : gp.nodes * (gp.nodes - 1) / 2;
    gp.edges = static_cast<int>(rng.between(base, pairs));
    Graph g = gen_graph(gp, rng.below(1u << 30));
    std::vector<Demand> alive;
    const auto count = rng.between(0, 4);
    double product = 1.0;
    for (RequestId k = 0; k < count; ++k) {
      const auto s = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(gp.nodes)));
      auto d = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(gp.nodes)));
      if (s == d) d = (d + 1) % gp.nodes;
      alive.push_back({k, s, d});
      product *= static_cast<double>(enumerate_simple_paths(g, s, d, 1000).size());
    }
    if (product > 1000) continue;
    ++checked;
    CHECK(optimal_nonsplittable_load(g, alive) == exhaustive_load(g, alive));
  }
  CHECK(checked > 100);
}

TEST_CASE("optimum never exceeds the planted load") {
  Graph g = gen_graph(GraphParams{6, 9, false, 2}, 17);
  auto [trace, cert] = gen_planted(g, PlantedParams{30, 10, 4}, 18);
  auto opt = optimal_loads(g, trace);
  auto planted = certificate_loads(g, trace, cert);
  REQUIRE(opt.size() == planted.size());
  for (std::size_t i = 0; i < opt.size(); ++i) CHECK(opt[i] <= planted[i] + 1e-12);
}

TEST_CASE("competitive_report") {
  LoadProfile profile;
  profile.points = {{0, 1.0, 1.0}, {1, 3.0, 1.0}, {2, 2.0, 0.5}};
  CHECK(profile.alg_peak() == 3.0);
  CHECK(profile.opt_peak() == 1.0);
  auto r = competitive_report(profile, 12);
  CHECK(r.ratio == 3.0);
  CHECK(r.bound == doctest::Approx(4.0 * std::log2(144.0)));
  CHECK(r.bound == doctest::Approx(28.68).epsilon(1e-3));
  CHECK(r.within_bound);
  CHECK_FALSE(r.flagged);

  LoadProfile equal;
  equal.points = {{0, 1.0, 1.0}};
  CHECK(competitive_report(equal, 1).ratio == 1.0);

  LoadProfile flat;
  flat.points = {{0, 1.0, 0.0}};
  CHECK_THROWS_WITH_AS(competitive_report(flat, 3), doctest::Contains("no load"), InputError);

  LoadProfile awful;
  awful.points = {{0, 100.0, 1.0}};
  auto bad = competitive_report(awful, 1);
  CHECK_FALSE(bad.within_bound);
  CHECK(bad.flagged);
}
