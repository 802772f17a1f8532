#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "support.hpp"
#include "wdn/hydraulics.hpp"
#include "wdn/units.hpp"

using namespace wdn;
using wdn::test::per_node;

namespace {

double hazen_williams_loss(double length, double diameter, double c, double q) {
  return 10.667 * std::pow(c, -1.852) * std::pow(diameter, -4.871) * length * std::pow(q, 1.852);
}

std::vector<double> no_tanks(const Network& net) { return initial_tank_levels(net); }

// R (fixed head) -> pump PU -> J, single-component curve in m^3/s.
Network pump_feed(double reservoir_head, std::vector<std::pair<double, double>> curve) {
  return Network::create({{"R", Reservoir{reservoir_head}}, {"J", Junction{0.0, 0.0}}},
                         {Link{"PU", "R", "J", Pump{"C", 1.0, 0.3, 3.0}}},
                         {Curve{"C", std::move(curve)}}, FlowUnit::CubicMetersPerSecond,
                         {{"J", 1}}, {"J"});
}

}  // namespace

TEST_CASE("single pipe matches a hand Hazen-Williams evaluation") {
  const Network net = test::single_pipe(50.0, 1000.0, 0.3, 100.0);
  const double expected = 50.0 - hazen_williams_loss(1000.0, 0.3, 100.0, 0.05);
  CHECK(expected == doctest::Approx(47.11).epsilon(1e-3));

  const auto demands = per_node(net, {{"J", 0.05}});
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = solve_snapshot(net, demands, {}, no_tanks(net), PdaParams{});
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(s.converged);
  CHECK(std::abs(s.heads[1] - expected) < 1e-3);
  CHECK(s.flow(net, "P") == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(s.delivered[1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(s.pressure(net, "J") == doctest::Approx(units::head_m_to_psi(s.heads[1])));
  CHECK(ms < 10.0);
}

TEST_CASE("identical parallel pipes split the demand evenly") {
  const Pipe pipe{800.0, 0.2, 110.0, 0.0, false};
  const Network net = Network::create({{"R", Reservoir{60.0}}, {"J", Junction{0.0, 0.0}}},
                                      {Link{"A", "R", "J", pipe}, Link{"B", "R", "J", pipe}}, {},
                                      FlowUnit::CubicMetersPerSecond, {{"J", 1}}, {"J"});
  const auto s = solve_snapshot(net, per_node(net, {{"J", 0.04}}), {}, no_tanks(net), PdaParams{});
  REQUIRE(s.converged);
  CHECK(s.flow(net, "A") == doctest::Approx(s.flow(net, "B")).epsilon(1e-12));
  CHECK(s.flow(net, "A") + s.flow(net, "B") == doctest::Approx(s.delivered[1]).epsilon(1e-9));
}

TEST_CASE("zero demand without pumps is a no-flow equilibrium") {
  const Pipe pipe{500.0, 0.15, 120.0, 0.0, false};
  const Network net = Network::create(
      {{"R", Reservoir{70.0}}, {"J1", Junction{5.0, 0.0}}, {"J2", Junction{10.0, 0.0}},
       {"J3", Junction{2.0, 0.0}}},
      {Link{"P1", "R", "J1", pipe}, Link{"P2", "J1", "J2", pipe}, Link{"P3", "J2", "J3", pipe},
       Link{"P4", "J3", "J1", pipe}},
      {}, FlowUnit::CubicMetersPerSecond, {{"J1", 1}, {"J2", 1}, {"J3", 1}}, {"J2"});
  const auto s = solve_snapshot(net, std::vector<double>(4, 0.0), {}, no_tanks(net), PdaParams{});
  REQUIRE(s.converged);
  for (double q : s.flows) CHECK(std::abs(q) < 1e-12);
  for (double h : s.heads) CHECK(h == doctest::Approx(70.0).epsilon(1e-12));
}

TEST_CASE("a junction cut off from every source is structurally infeasible") {
  Link closed{"P", "R", "J", Pipe{100.0, 0.2, 100.0, 0.0, false}};
  closed.status = LinkStatus::Closed;
  const Network net = Network::create({{"R", Reservoir{50.0}}, {"J", Junction{0.0, 0.0}}}, {closed},
                                      {}, FlowUnit::CubicMetersPerSecond, {{"J", 1}}, {"J"});
  try {
    solve_snapshot(net, per_node(net, {{"J", 0.01}}), {}, no_tanks(net), PdaParams{});
    FAIL("expected StructuralInfeasibility");
  } catch (const StructuralInfeasibility& e) {
    CHECK(e.junction_id() == "J");
  }
}

TEST_CASE("three-point pump fits") {
  SUBCASE("linear curve in US units") {
    const std::vector<std::pair<double, double>> pts = {{0, 500}, {2000, 300}, {4000, 100}};
    const PumpModel m = fit_pump_curve(pts);
    CHECK(m.h0 == 500.0);
    CHECK(m.n == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.r == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(pump_head(m, 2000.0, 1.0) == 300.0);
    CHECK(pump_head(m, 0.0, 2.0) == doctest::Approx(2000.0).epsilon(1e-12));
    CHECK(pump_head(m, 500.0, 0.5) == doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("small linear curve") {
    const std::vector<std::pair<double, double>> pts = {{0, 100}, {1, 90}, {2, 80}};
    const PumpModel m = fit_pump_curve(pts);
    CHECK(m.h0 == 100.0);
    CHECK(m.n == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.r == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("higher-capacity curve") {
    const std::vector<std::pair<double, double>> pts = {{0, 500}, {8000, 138}, {14000, 86}};
    const PumpModel m = fit_pump_curve(pts);
    const double n = std::log(414.0 / 362.0) / std::log(14000.0 / 8000.0);
    const double r = 362.0 / std::pow(8000.0, n);
    CHECK(n == doctest::Approx(0.2398462747).epsilon(1e-9));
    CHECK(r == doctest::Approx(41.934066284).epsilon(1e-9));
    CHECK(m.n == doctest::Approx(n).epsilon(1e-12));
    CHECK(m.r == doctest::Approx(r).epsilon(1e-12));
    for (const auto& [q, h] : pts) CHECK(std::abs(pump_head(m, q, 1.0) - h) <= 1e-9 * h);
  }
  SUBCASE("bad orderings are rejected") {
    const std::vector<std::pair<double, double>> rising = {{0, 100}, {1, 110}, {2, 80}};
    const std::vector<std::pair<double, double>> nonzero = {{1, 100}, {2, 90}, {3, 80}};
    const std::vector<std::pair<double, double>> flows = {{0, 100}, {2, 90}, {1, 80}};
    CHECK_THROWS(fit_pump_curve(rising));
    CHECK_THROWS(fit_pump_curve(nonzero));
    CHECK_THROWS(fit_pump_curve(flows));
  }
}

TEST_CASE("pump head is floored past runout") {
  const std::vector<std::pair<double, double>> pts = {{0, 500}, {2000, 300}, {4000, 100}};
  const PumpModel m = fit_pump_curve(pts);
  CHECK(pump_head(m, 9000.0, 1.0) == 0.0);
}

TEST_CASE("pressure-dependent delivery") {
  const PdaParams pda;
  CHECK(pda_factor(0.0, pda) == 0.0);
  CHECK(pda_factor(60.0, pda) == 1.0);
  CHECK(std::abs(pda_factor(15.0, pda) - 0.5) <= 1e-12);
  CHECK(pda_factor(-30.0, pda) == 0.0);
  CHECK(pda_factor(200.0, pda) == 1.0);

  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(-50.0, 150.0);
  std::vector<double> ps(100000);
  for (double& p : ps) p = u(eng);
  std::sort(ps.begin(), ps.end());
  double prev = -1.0;
  bool ok = true;
  for (double p : ps) {
    const double f = pda_factor(p, pda);
    ok = ok && f >= prev && f >= 0.0 && f <= 1.0 && pda_slope(p, pda) >= 0.0;
    prev = f;
  }
  CHECK(ok);

  PdaParams bad;
  bad.smoothing_eps = 20.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("pda slope matches a finite difference") {
  const PdaParams pda;
  for (double p : {-0.2, 0.3, 5.0, 15.0, 40.0, 59.7, 60.2}) {
    const double h = 1e-6;
    const double fd = (pda_factor(p + h, pda) - pda_factor(p - h, pda)) / (2 * h);
    CHECK(pda_slope(p, pda) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("tank levels integrate net inflow") {
  Network net = Network::create(
      {{"R", Reservoir{100.0}}, {"T", Tank{50.0, 1.0, 8.0, 4.0, 10.0}}},
      {Link{"P", "R", "T", Pipe{100.0, 0.2, 100.0, 0.0, false}}}, {},
      FlowUnit::CubicMetersPerSecond, {}, {});
  const std::size_t t = *net.node_index("T");
  HydraulicState s;
  s.flows = {0.01};
  std::vector<double> levels = initial_tank_levels(net);
  CHECK(levels[t] == 4.0);

  auto up = step_tanks(net, s, levels);
  CHECK(up.levels[t] - 4.0 == doctest::Approx(36.0 / (std::numbers::pi * 25.0)).epsilon(1e-12));
  CHECK(up.levels[t] - 4.0 == doctest::Approx(0.4584).epsilon(1e-4));
  CHECK_FALSE(up.full[t]);

  s.flows = {0.0};
  CHECK(step_tanks(net, s, levels).levels[t] == 4.0);

  s.flows = {0.01};
  levels[t] = 8.0;
  up = step_tanks(net, s, levels);
  CHECK(up.levels[t] == 8.0);
  CHECK(up.full[t]);

  s.flows = {-0.05};
  levels[t] = 1.2;
  up = step_tanks(net, s, levels);
  CHECK(up.levels[t] == 1.0);
  CHECK(up.empty[t]);

  CHECK_THROWS(step_tanks(net, s, levels, 0.0));
}

TEST_CASE("pump power for a known operating point") {
  // Linear curve through (0.1, 30): the pump is the only path, so q = demand.
  const Network net = pump_feed(20.0, {{0.0, 40.0}, {0.1, 30.0}, {0.2, 20.0}});
  const auto s = solve_snapshot(net, per_node(net, {{"J", 0.1}}), {{{"PU", 1.0}}, {}, {}},
                                no_tanks(net), PdaParams{});
  REQUIRE(s.converged);
  const std::size_t pu = *net.link_index("PU");
  CHECK(s.flows[pu] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(s.pump_gain[pu] == doctest::Approx(30.0).epsilon(1e-7));
  CHECK(s.heads[1] == doctest::Approx(50.0).epsilon(1e-7));
  const double kwh = s.total_pump_power() * 1.0;
  CHECK(kwh == doctest::Approx(1000.0 * 9.80665 * 0.1 * 30.0 / (1000.0 * 0.75)).epsilon(1e-7));
  CHECK(kwh == doctest::Approx(39.23).epsilon(1e-4));
}

TEST_CASE("head falls with demand and rises with pump speed") {
  const Network pipe = test::single_pipe(80.0, 1000.0, 0.2, 110.0);
  double prev = 1e9;
  for (double d : {0.0, 0.005, 0.01, 0.02, 0.03}) {
    const auto s = solve_snapshot(pipe, per_node(pipe, {{"J", d}}), {}, no_tanks(pipe), PdaParams{});
    REQUIRE(s.converged);
    CHECK(s.heads[1] < prev);
    prev = s.heads[1];
  }

  const Network pumped = pump_feed(10.0, {{0.0, 40.0}, {0.05, 30.0}, {0.1, 10.0}});
  prev = -1e9;
  for (double w : {0.3, 0.8, 1.0, 1.5, 2.2, 3.0}) {
    const auto s = solve_snapshot(pumped, per_node(pumped, {{"J", 0.03}}), {{{"PU", w}}, {}, {}},
                                  no_tanks(pumped), PdaParams{});
    REQUIRE(s.converged);
    CHECK(s.heads[1] >= prev);
    prev = s.heads[1];
  }
}

TEST_CASE("mininet snapshots conserve mass and always converge") {
  std::mt19937_64 eng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int solved = 0;
  for (std::uint64_t variant = 0; variant <= 50; ++variant) {
    const Network net = variant == 0 ? build_mininet() : test::perturbed_mininet(variant);
    const HydraulicSolver solver(net);
    const std::size_t tank = *net.node_index("T1");
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> demands(net.nodes().size(), 0.0);
      for (std::size_t j : net.junction_indices()) demands[j] = 0.0015 * u(eng);
      ControlAction a = test::init_action(net);
      a.pump_speed["PU1"] = 0.3 + 2.7 * u(eng);
      a.valve_setting["V1"] = 8.0 + 42.0 * u(eng);
      a.delegated["PU2"] = u(eng) < 0.5;
      auto levels = initial_tank_levels(net);
      levels[tank] = 1.0 + 7.0 * u(eng);
      const auto s = solver.solve(demands, a, levels, PdaParams{});
      CHECK(s.converged);
      CHECK(s.iterations <= 200);
      CHECK(s.max_residual <= 1e-6);
      CHECK(test::junction_imbalance(net, s.flows, s.delivered) <= 1e-6);
      for (double p : s.pump_power) CHECK(p >= 0.0);
      ++solved;
    }
  }
  CHECK(solved == 51 * 20);
}

TEST_CASE("declaration order does not change the solution") {
  const Network net = build_mininet();
  std::vector<Node> nodes(net.nodes().rbegin(), net.nodes().rend());
  std::vector<Link> links(net.links().rbegin(), net.links().rend());
  const Network rev = Network::create(nodes, links, net.curves(), net.flow_unit(), net.regions(),
                                      net.interest_nodes());
  ControlAction a = test::init_action(net);
  a.pump_speed["PU1"] = 1.4;
  a.valve_setting["V1"] = 22.0;
  auto demands_for = [](const Network& n) {
    std::vector<double> d(n.nodes().size(), 0.0);
    for (std::size_t j : n.junction_indices()) d[j] = 0.0002 * (1 + n.nodes()[j].id.back() - '0');
    return d;
  };
  const auto s1 = solve_snapshot(net, demands_for(net), a, initial_tank_levels(net), PdaParams{});
  const auto s2 = solve_snapshot(rev, demands_for(rev), a, initial_tank_levels(rev), PdaParams{});
  REQUIRE(s1.converged);
  REQUIRE(s2.converged);
  for (std::size_t i = 0; i < net.nodes().size(); ++i) {
    const std::size_t k = *rev.node_index(net.nodes()[i].id);
    CHECK(std::abs(s1.heads[i] - s2.heads[k]) <= 1e-9);
  }
}

namespace {

// R -> P1 -> J1 -> valve(s) -> J2 -> P2 -> J3, all junctions at elevation 0.
Network valve_line(int valves) {
  std::vector<Link> links = {Link{"P1", "R", "J1", Pipe{400.0, 0.2, 120.0, 0.0, false}},
                             Link{"P2", "J2", "J3", Pipe{400.0, 0.2, 120.0, 0.0, false}}};
  for (int i = 0; i < valves; ++i)
    links.push_back(Link{"V" + std::to_string(i + 1), "J1", "J2", PbvValve{0.2, 10.0, 8.0, 50.0, 0.0}});
  return Network::create({{"R", Reservoir{120.0}}, {"J1", Junction{}}, {"J2", Junction{}}, {"J3", Junction{}}},
                         std::move(links), {}, FlowUnit::CubicMetersPerSecond,
                         {{"J1", 1}, {"J2", 1}, {"J3", 1}}, {"J3"});
}

}  // namespace

TEST_CASE("an open PBV imposes exactly its setting") {
  for (int valves : {1, 2}) {
    const Network net = valve_line(valves);
    ControlAction a;
    for (int i = 1; i <= valves; ++i) a.valve_setting["V" + std::to_string(i)] = 12.5;
    const auto s = solve_snapshot(net, per_node(net, {{"J3", 0.02}}), a, no_tanks(net), PdaParams{});
    REQUIRE(s.converged);
    const double drop = s.heads[*net.node_index("J1")] - s.heads[*net.node_index("J2")];
    // A second parallel valve falls back to a stiff link, hence the looser bound.
    CHECK(std::abs(drop - units::psi_to_head_m(12.5)) < (valves == 1 ? 1e-12 : 1e-6));
    double through = 0.0;
    for (int i = 1; i <= valves; ++i) through += s.flow(net, "V" + std::to_string(i));
    CHECK(through == doctest::Approx(0.02).epsilon(1e-9));
    CHECK(test::junction_imbalance(net, s.flows, s.delivered) <= 1e-9);
  }
}

TEST_CASE("a PBV fed straight from a reservoir fixes the downstream head") {
  const Network net = Network::create(
      {{"R", Reservoir{80.0}}, {"J1", Junction{}}, {"J2", Junction{}}},
      {Link{"V", "R", "J1", PbvValve{0.2, 10.0, 8.0, 50.0, 0.0}},
       Link{"P", "J1", "J2", Pipe{300.0, 0.15, 100.0, 0.0, false}}},
      {}, FlowUnit::CubicMetersPerSecond, {{"J1", 1}, {"J2", 1}}, {"J2"});
  const auto s = solve_snapshot(net, per_node(net, {{"J1", 0.003}, {"J2", 0.01}}),
                                {{}, {{"V", 20.0}}, {}}, no_tanks(net), PdaParams{});
  REQUIRE(s.converged);
  CHECK(s.heads[1] == doctest::Approx(80.0 - units::psi_to_head_m(20.0)).epsilon(1e-14));
  CHECK(s.flow(net, "V") == doctest::Approx(s.delivered[1] + s.delivered[2]).epsilon(1e-12));
}

TEST_CASE("a PBV facing reverse flow closes") {
  // J2 is held higher than J1 by its own reservoir, so the valve J1 -> J2 shuts.
  const Network net = Network::create(
      {{"RA", Reservoir{40.0}}, {"RB", Reservoir{90.0}}, {"J1", Junction{}}, {"J2", Junction{}}},
      {Link{"PA", "RA", "J1", Pipe{300.0, 0.2, 100.0, 0.0, false}},
       Link{"PB", "RB", "J2", Pipe{300.0, 0.2, 100.0, 0.0, false}},
       Link{"V", "J1", "J2", PbvValve{0.2, 10.0, 8.0, 50.0, 0.0}}},
      {}, FlowUnit::CubicMetersPerSecond, {{"J1", 1}, {"J2", 1}}, {"J1"});
  const auto s = solve_snapshot(net, per_node(net, {{"J1", 0.005}, {"J2", 0.005}}),
                                {{}, {{"V", 10.0}}, {}}, no_tanks(net), PdaParams{});
  REQUIRE(s.converged);
  CHECK_FALSE(s.open[*net.link_index("V")]);
  CHECK(s.flow(net, "V") == 0.0);
  CHECK(s.flow(net, "PA") == doctest::Approx(s.delivered[*net.node_index("J1")]).epsilon(1e-9));
}
