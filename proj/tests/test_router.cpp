#include <cmath>

#include "circuit_route/audit.hpp"
#include "circuit_route/errors.hpp"
#include "circuit_route/generators.hpp"
#include "circuit_route/router.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace circuit_route;
using circuit_route::testing::make_graph;

TEST_CASE("init derives x_e = 1/(4m)") {
  Graph ring = make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
  Router r(ring);
  for (EdgeId e = 0; e < 4; ++e) CHECK(r.x_value(e) == 0.0625);
  CHECK(r.objective() == 0.25);
  CHECK(r.alive().empty());

  Graph single = make_graph(2, {{0, 1, 1.0}});
  CHECK(Router(single).x_value(0) == 0.25);
}

TEST_CASE("x_value closed form from the path counter") {
  // m = 4, c = 1, two paths on edge 0
  Graph g = make_graph(2, {{0, 1, 1.0}, {0, 1, 1.0}, {0, 1, 1.0}, {0, 1, 1.0}});
  Router r(g);
  r.route(1, 0, 1);  // edge 0
  r.route(2, 0, 1);  // edge 1
  r.route(3, 0, 1);  // edge 2
  r.route(4, 0, 1);  // edge 3
  r.route(5, 0, 1);  // back to edge 0
  CHECK(r.path_count(0) == 2);
  CHECK(r.x_value(0) == 0.09765625);

  // m = 2, c = 2, one path
  Graph h = make_graph(2, {{0, 1, 2.0}, {0, 1, 2.0}});
  Router q(h);
  q.route(1, 0, 1);
  CHECK(q.x_value(0) == 0.140625);
}

TEST_CASE("route hand traces") {
  SUBCASE("two parallel edges") {
    Graph g = make_graph(2, {{0, 1, 1.0}, {0, 1, 1.0}});
    Router r(g);
    auto first = r.route(1, 0, 1);
    CHECK(first.path.edges == std::vector<EdgeId>{0});
    CHECK(first.path_weight == 0.125);
    CHECK(first.z == 0.9375);
    CHECK(r.path_count(0) == 1);
    CHECK(r.x_value(0) == 0.15625);

    auto second = r.route(2, 0, 1);
    CHECK(second.path.edges == std::vector<EdgeId>{1});
    CHECK(second.z == 0.9375);
  }
  SUBCASE("single edge") {
    Graph g = make_graph(2, {{0, 1, 1.0}});
    Router r(g);
    auto rec = r.route(1, 0, 1);
    CHECK(rec.path_weight == 0.25);
    CHECK(rec.z == 0.875);
    CHECK(r.x_value(0) == 0.3125);
    CHECK(r.objective() == 1.1875);
    CHECK(rec.delta_p == doctest::Approx(1.0 - 0.25 * 0.25).epsilon(1e-15));
  }
}

TEST_CASE("route errors") {
  Graph g = make_graph(3, {{0, 1, 1.0}});
  Router r(g);
  r.route(1, 0, 1);
  CHECK_THROWS_AS(r.route(1, 0, 1), RoutingError);
  CHECK_THROWS_WITH_AS(r.route(2, 0, 2), doctest::Contains("unreachable"), RoutingError);
  CHECK(r.alive().size() == 1);
}

TEST_CASE("unroute inverts route") {
  Graph g = make_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 1.0}});
  Router r(g);
  const auto counts = r.path_counts();
  const double p0 = r.objective();
  r.route(1, 0, 1);
  r.unroute(1);
  CHECK(r.path_counts() == counts);
  CHECK(r.alive().empty());
  CHECK(r.objective() == p0);

  r.route(1, 0, 1);
  r.route(2, 0, 1);
  CHECK(r.path_count(0) == 2);
  r.unroute(2);
  CHECK(r.path_count(0) == 1);
  CHECK(r.x_value(0) == (1.0 / 12) * 1.25);

  CHECK_THROWS_AS(r.unroute(77), RoutingError);
}

TEST_CASE("route then unroute restores the prior state on random states") {
  GraphParams gp{10, 18, false, 3};
  Graph g = gen_graph(gp, 5);
  auto [trace, cert] = gen_planted(g, PlantedParams{60, 30, 0}, 6);
  Router r(g);
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    r.step(trace.events[i]);
    if (i % 7 != 0) continue;
    const auto counts = r.path_counts();
    std::vector<double> x;
    for (EdgeId e = 0; e < g.num_edges(); ++e) x.push_back(r.x_value(e));
    const auto alive = r.alive().size();
    r.route(100000, 0, 5);
    r.unroute(100000);
    CHECK(r.path_counts() == counts);
    for (EdgeId e = 0; e < g.num_edges(); ++e) CHECK(r.x_value(e) == x[static_cast<std::size_t>(e)]);
    CHECK(r.alive().size() == alive);
  }
}

TEST_CASE("find_violation") {
  Graph g = testing::reroute_fixture();
  Router r(g);
  CHECK_FALSE(r.find_violation());

  // Right after a route nothing else changed, so the new request is satisfied.
  r.route(1, 0, 1);
  CHECK_FALSE(r.find_violation());

  for (RequestId k = 2; k <= 9; ++k) r.route(k, 0, 1);
  CHECK(r.alive().at(9).path.edges == std::vector<EdgeId>{0});
  for (RequestId k : {2, 4, 6}) {
    r.unroute(k);
    CHECK_FALSE(r.find_violation());
  }
  r.unroute(8);
  auto v = r.find_violation();
  REQUIRE(v);
  CHECK(v->k == 9);
  CHECK(v->path.path.edges == std::vector<EdgeId>{1});
}

TEST_CASE("make_feasible") {
  Graph g = testing::reroute_fixture();
  Router r(g);
  CHECK(r.make_feasible().empty());

  for (RequestId k = 1; k <= 9; ++k) r.route(k, 0, 1);
  for (RequestId k : {2, 4, 6, 8}) r.unroute(k);
  const auto counts = r.path_counts();
  auto moves = r.make_feasible();
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].k == 9);
  CHECK(moves[0].old_path.edges == std::vector<EdgeId>{0});
  CHECK(moves[0].new_path.edges == std::vector<EdgeId>{1});
  CHECK(r.reroutes(9) == 1);
  CHECK(r.path_count(0) == counts[0] - 1);
  CHECK(r.path_count(1) == counts[1] + 1);
  CHECK_FALSE(r.find_violation());
  CHECK(r.make_feasible().empty());
}

TEST_CASE("step reports") {
  Graph g = testing::reroute_fixture();
  Router r(g);
  Trace t = testing::reroute_trace();

  StepReport first = r.step(t.events[0]);
  CHECK(first.records.size() == 1);
  CHECK(first.records[0].kind == RecordKind::arrive);
  CHECK(first.records[0].when == SubStep{0, 0});
  CHECK(first.reroutes.empty());

  for (std::size_t i = 1; i < 9; ++i) r.step(t.events[i]);
  StepReport quiet = r.step(t.events[9]);  // r2 departs
  CHECK(quiet.records.size() == 1);
  CHECK(quiet.reroutes.empty());
  r.step(t.events[10]);
  r.step(t.events[11]);

  StepReport busy = r.step(t.events[12]);  // r8 departs, r9 moves
  REQUIRE(busy.records.size() == 3);
  CHECK(busy.reroutes.size() == 1);
  CHECK(busy.records[1].kind == RecordKind::dummy_depart);
  CHECK(busy.records[2].kind == RecordKind::dummy_arrive);
  CHECK(busy.records[1].k == 9);
  CHECK(busy.records[2].k == 9);
  CHECK(busy.records[1].when == SubStep{12, 1});
  CHECK(busy.records[2].when == SubStep{12, 2});
  CHECK(busy.records[2].generation == 1);
  CHECK(busy.max_load == 4.0);

  CHECK(r.alive_at_arrival(1) == 1);
  CHECK(r.alive_at_arrival(9) == 9);
  CHECK(r.reroutes(9) == 1);
  CHECK(r.reroutes(7) == 0);

  CHECK_THROWS_AS(r.step(Event::arrival(13, 1, 0, 1)), RoutingError);  // arrives twice
  CHECK_THROWS_AS(r.step(Event::departure(14, 42)), RoutingError);
}

TEST_CASE("counter consistency and covering feasibility after every step") {
  GraphParams gp{12, 24, true, 2};
  Graph g = gen_graph(gp, 11);
  auto [trace, cert] = gen_planted(g, PlantedParams{400, 80, 0}, 12);
  Router r(g);
  for (const Event& ev : trace.events) {
    StepReport rep = r.step(ev);
    std::vector<int> recount(static_cast<std::size_t>(g.num_edges()), 0);
    for (const auto& [k, a] : r.alive()) {
      for (EdgeId e : a.path.edges) ++recount[static_cast<std::size_t>(e)];
      CHECK(a.z > 0.0);
      CHECK(a.z <= 1.0);
    }
    REQUIRE(recount == r.path_counts());
    CHECK(check_primal_feasible(r, 1e-9).pass);
    for (std::size_t i = 1; i < rep.records.size(); i += 2) {
      CHECK(rep.records[i].kind == RecordKind::dummy_depart);
      CHECK(rep.records[i + 1].kind == RecordKind::dummy_arrive);
      CHECK(rep.records[i].k == rep.records[i + 1].k);
    }
  }
}

TEST_CASE("x_value stays exact for large counters") {
  Graph g = make_graph(2, {{0, 1, 1.0}});
  Router r(g);
  for (RequestId k = 1; k <= 1100; ++k) r.route(k, 0, 1);
  const double expected = std::exp(std::log(0.25) + 1100 * std::log(1.25));
  CHECK(r.x_value(0) == doctest::Approx(expected).epsilon(1e-12));
  const double at_limit = 0.25 * std::pow(1.25, 1024);
  for (RequestId k = 1025; k <= 1100; ++k) r.unroute(k);
  CHECK(r.x_value(0) == at_limit);
}

TEST_CASE("frozen churn run on a detour fan") {
  // Values recorded from this implementation; any change to routing,
  // tie-breaking or the generators shows up here.
  Graph g = testing::fan_graph(4, 8, 2.0);
  CHECK(g.num_edges() == 33);
  auto [trace, cert] = gen_churn_stress(g, 0, 100, 7);
  CHECK(trace.events.size() == 1800);
  Router r(g);
  double peak = 0.0;
  for (const Event& ev : trace.events) peak = std::max(peak, r.step(ev).max_load);
  int total = 0, most = 0;
  for (const auto& [k, n] : r.reroute_counts()) {
    total += n;
    most = std::max(most, n);
  }
  CHECK(peak == 7.0);
  CHECK(total == 116);
  CHECK(most == 1);
  CHECK(r.alive().empty());
  CHECK(r.objective() == doctest::Approx(0.25).epsilon(1e-12));
}
