#include <doctest.h>

#include <queue>
#include <random>
#include <set>

#include "support.hpp"
#include "wdn/units.hpp"

using namespace wdn;

namespace {

const char* kMinimal = R"([RESERVOIRS]
R 50
[JUNCTIONS]
J 0 0
[PIPES]
P R J 1000 300 100 0 Open
[END]
)";

NetworkError::Kind error_kind(const std::string& text) {
  try {
    parse_inp(text, FlowUnit::CubicMetersPerSecond);
  } catch (const NetworkError& e) {
    return e.kind();
  }
  FAIL("expected a NetworkError");
  return NetworkError::Kind::Invalid;
}

}  // namespace

TEST_CASE("psi and metres of head convert both ways") {
  CHECK(units::psi_to_head_m(0.0) == 0.0);
  CHECK(units::psi_to_head_m(60.0) == doctest::Approx(60.0 * 6894.757 / 9806.65).epsilon(1e-12));
  CHECK(std::abs(units::psi_to_head_m(60.0) - 42.184) < 1e-3);
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(eng);
    const double back = units::head_m_to_psi(units::psi_to_head_m(p));
    CHECK(std::abs(back - p) <= 1e-12 * std::max(1.0, std::abs(p)));
  }
}

TEST_CASE("minimal file parses to two nodes and one link") {
  const auto parsed = parse_inp(kMinimal, FlowUnit::CubicMetersPerSecond);
  CHECK(parsed.network.nodes().size() == 2);
  CHECK(parsed.network.links().size() == 1);
  const auto& p = std::get<Pipe>(parsed.network.link("P").kind);
  CHECK(p.diameter == doctest::Approx(0.3));
  CHECK(p.length == 1000.0);
  // No [REGIONS] / [INTEREST]: defaults are reported.
  CHECK(parsed.warnings.size() == 2);
  CHECK(parsed.network.region_of("J") == 1);
  CHECK(parsed.network.interest_nodes() == std::vector<std::string>{"J"});
}

TEST_CASE("pump line binds a three-point curve") {
  const std::string text = R"([RESERVOIRS]
R 50
[JUNCTIONS]
J 10 0
[PUMPS]
PU R J HEAD 1 SPEED 1
[CURVES]
1 0 500
1 2000 300
1 4000 100
)";
  const auto net = parse_inp(text, FlowUnit::GallonsPerMinute).network;
  const auto& pump = std::get<Pump>(net.link("PU").kind);
  CHECK(pump.curve_id == "1");
  const std::vector<std::pair<double, double>> pts = {{0, 500}, {2000, 300}, {4000, 100}};
  CHECK(net.curve("1").points == pts);
  CHECK(net.controlled_pumps().size() == 1);
}

TEST_CASE("dangling node reference names the node and the line") {
  const std::string text = R"([RESERVOIRS]
R 50
[JUNCTIONS]
J 0 0
[PIPES]
P R ZZZ 100 300 100 0 Open
)";
  try {
    parse_inp(text, FlowUnit::CubicMetersPerSecond);
    FAIL("expected an error");
  } catch (const NetworkError& e) {
    CHECK(e.kind() == NetworkError::Kind::DanglingReference);
    const std::string what = e.what();
    CHECK(what.find("ZZZ") != std::string::npos);
    CHECK(what.find("line 6") != std::string::npos);
  }
}

TEST_CASE("parser rejects malformed input with the right error kind") {
  CHECK(error_kind("[RESERVOIRS]\nR 50\nR 60\n") == NetworkError::Kind::DuplicateId);
  CHECK(error_kind("J 0 0\n") == NetworkError::Kind::Syntax);
  CHECK(error_kind("[JUNCTIONS\nJ 0 0\n") == NetworkError::Kind::Syntax);
  CHECK(error_kind("[RESERVOIRS]\nR 50\n[JUNCTIONS]\nJ 0 0\n[PUMPS]\nPU R J HEAD C9\n") ==
        NetworkError::Kind::DanglingReference);
  CHECK(error_kind("[RESERVOIRS]\nR 50\n[JUNCTIONS]\nJ 0 0\n[PIPES]\nP R J 100 300 100 0 Open\n"
                   "[INTEREST]\nR\n") == NetworkError::Kind::Invalid);
}

TEST_CASE("unknown sections are skipped with a warning") {
  const auto parsed =
      parse_inp(std::string(kMinimal).insert(0, "[QUALITY]\nJ 1\n"), FlowUnit::CubicMetersPerSecond);
  bool warned = false;
  for (const auto& w : parsed.warnings) warned |= w.find("[QUALITY]") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("mininet shape") {
  const Network net = build_mininet();
  CHECK(net.nodes().size() == 10);
  CHECK(net.links().size() == 13);
  CHECK(net.region_count() == 2);
  CHECK(net.junction_indices().size() == 8);
  CHECK(net.controlled_pumps().size() == 1);
  CHECK(net.tank_pumps().size() == 1);
  CHECK(net.valves().size() == 1);

  for (std::size_t i : net.pumps()) {
    const auto& p = std::get<Pump>(net.links()[i].kind);
    CHECK(p.speed_min == 0.3);
    CHECK(p.speed_max == 3.0);
  }
  for (std::size_t i : net.valves()) {
    const auto& v = std::get<PbvValve>(net.links()[i].kind);
    CHECK(v.setting_min == 8.0);
    CHECK(v.setting_max == 50.0);
  }
}

TEST_CASE("every mininet junction is reachable from the reservoir") {
  const Network net = build_mininet();
  std::vector<std::vector<std::size_t>> adj(net.nodes().size());
  for (std::size_t k = 0; k < net.links().size(); ++k) {
    if (net.links()[k].status != LinkStatus::Open) continue;
    adj[net.from_index(k)].push_back(net.to_index(k));
    adj[net.to_index(k)].push_back(net.from_index(k));
  }
  std::set<std::size_t> seen = {*net.node_index("R1")};
  std::queue<std::size_t> q;
  q.push(*net.node_index("R1"));
  while (!q.empty()) {
    const std::size_t n = q.front();
    q.pop();
    for (std::size_t m : adj[n])
      if (seen.insert(m).second) q.push(m);
  }
  for (std::size_t j : net.junction_indices()) CHECK(seen.contains(j));
}

TEST_CASE("canonical writer round-trips") {
  const Network net = build_mininet();
  const std::string text = write_inp(net);
  const Network again = parse_inp(text, FlowUnit::CubicMetersPerSecond).network;
  CHECK(write_inp(again) == text);
  CHECK(again.nodes().size() == net.nodes().size());
  CHECK(again.interest_nodes() == net.interest_nodes());
  CHECK(again.regions() == net.regions());
  CHECK(again.links().size() == net.links().size());
  // The writer groups links by section, so match them by id.
  for (const Link& l : net.links()) {
    const Link& m = again.link(l.id);
    CHECK(m.from == l.from);
    CHECK(m.to == l.to);
    CHECK(m.kind.index() == l.kind.index());
    if (const auto* p = std::get_if<Pipe>(&l.kind)) {
      const auto& q = std::get<Pipe>(m.kind);
      CHECK(q.diameter == doctest::Approx(p->diameter).epsilon(1e-12));
      CHECK(q.length == p->length);
    }
  }
}

TEST_CASE("writer round-trips US units") {
  const std::string text = R"([RESERVOIRS]
R 200
[JUNCTIONS]
J 10 25
[TANKS]
T 100 5 1 20 40
[PIPES]
P R J 1000 12 120 0.5 Open
P2 J T 500 8 100 0 CV
[REGIONS]
J 1
)";
  const Network net = parse_inp(text, FlowUnit::GallonsPerMinute).network;
  const auto& j = std::get<Junction>(net.node("J").kind);
  CHECK(j.elevation == doctest::Approx(10 * units::kMetersPerFoot));
  CHECK(j.base_demand == doctest::Approx(25 * units::kCmsPerGpm));
  CHECK(std::get<Pipe>(net.link("P2").kind).check_valve);
  const std::string canon = write_inp(net);
  CHECK(write_inp(parse_inp(canon, FlowUnit::GallonsPerMinute).network) == canon);
}

TEST_CASE("network invariants are enforced at construction") {
  using K = NetworkError::Kind;
  auto kind_of = [](auto&& build) {
    try {
      build();
    } catch (const NetworkError& e) {
      return e.kind();
    }
    return K::Syntax;  // sentinel: nothing thrown
  };
  CHECK(kind_of([] {
          Network::create({{"R", Reservoir{1}}, {"J", Junction{}}},
                          {Link{"P", "R", "R", Pipe{1, 1, 100, 0, false}}}, {},
                          FlowUnit::CubicMetersPerSecond, {{"J", 1}}, {});
        }) == K::Invalid);
  CHECK(kind_of([] {
          Network::create({{"R", Reservoir{1}}, {"J", Junction{}}},
                          {Link{"P", "R", "J", Pipe{1, 1, 100, 0, false}}}, {},
                          FlowUnit::CubicMetersPerSecond, {}, {});
        }) == K::Invalid);
  CHECK(kind_of([] {
          Network::create({{"R", Reservoir{1}}, {"J", Junction{}}},
                          {Link{"P", "R", "J", Pipe{1, 1, 100, 0, false}}}, {},
                          FlowUnit::CubicMetersPerSecond, {{"J", 2}}, {});
        }) == K::Invalid);
  CHECK(kind_of([] {
          Network::create({{"R", Reservoir{1}}, {"J", Junction{}}},
                          {Link{"PU", "R", "J", Pump{"C", 1.0, 0.3, 3.0}}}, {},
                          FlowUnit::CubicMetersPerSecond, {{"J", 1}}, {});
        }) == K::DanglingReference);
  CHECK(kind_of([] {
          Network::create({{"R", Reservoir{1}}, {"J", Junction{}}},
                          {Link{"PU", "R", "J", Pump{"C", 5.0, 0.3, 3.0}}},
                          {{"C", {{0, 10}, {1, 5}, {2, 1}}}}, FlowUnit::CubicMetersPerSecond,
                          {{"J", 1}}, {});
        }) == K::Invalid);
}
