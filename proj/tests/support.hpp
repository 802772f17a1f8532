#pragma once
// Shared fixtures for the unit tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wdn/action.hpp"
#include "wdn/network.hpp"

namespace wdn::test {

// Reservoir R -> pipe P -> junction J (elevation 0).
inline Network single_pipe(double head, double length, double diameter, double roughness) {
  return Network::create({{"R", Reservoir{head}}, {"J", Junction{0.0, 0.0}}},
                         {Link{"P", "R", "J", Pipe{length, diameter, roughness, 0.0, false}}}, {},
                         FlowUnit::CubicMetersPerSecond, {{"J", 1}}, {"J"});
}

// Per-node vector with the listed entries set.
inline std::vector<double> per_node(const Network& net, const std::map<std::string, double>& v) {
  std::vector<double> out(net.nodes().size(), 0.0);
  for (const auto& [id, x] : v) out[*net.node_index(id)] = x;
  return out;
}

// Controllable pumps at init speed, valves at init setting, tank pumps on.
inline ControlAction init_action(const Network& net) {
  ControlAction a;
  for (std::size_t i : net.controlled_pumps())
    a.pump_speed[net.links()[i].id] = std::get<Pump>(net.links()[i].kind).init_speed;
  for (std::size_t i : net.valves())
    a.valve_setting[net.links()[i].id] = std::get<PbvValve>(net.links()[i].kind).init_setting;
  for (std::size_t i : net.tank_pumps()) a.delegated[net.links()[i].id] = true;
  return a;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "wdn-tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Mininet with pipe roughness, diameter and junction elevation jittered.
inline Network perturbed_mininet(std::uint64_t seed) {
  const Network base = build_mininet();
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Node> nodes = base.nodes();
  std::vector<Link> links = base.links();
  for (Node& n : nodes)
    if (auto* j = std::get_if<Junction>(&n.kind)) j->elevation += 1.5 * u(eng);
  for (Link& l : links)
    if (auto* p = std::get_if<Pipe>(&l.kind)) {
      p->roughness *= 1.0 + 0.2 * u(eng);
      p->diameter *= 1.0 + 0.1 * u(eng);
    }
  std::vector<std::string> interest = base.interest_nodes();
  return Network::create(std::move(nodes), std::move(links), base.curves(), base.flow_unit(),
                         base.regions(), std::move(interest));
}

// Largest junction mass imbalance recomputed from link flows and delivered demand.
inline double junction_imbalance(const Network& net, const std::vector<double>& flows,
                                 const std::vector<double>& delivered) {
  std::vector<double> net_in(net.nodes().size(), 0.0);
  for (std::size_t k = 0; k < net.links().size(); ++k) {
    net_in[net.to_index(k)] += flows[k];
    net_in[net.from_index(k)] -= flows[k];
  }
  double worst = 0.0;
  for (std::size_t j : net.junction_indices())
    worst = std::max(worst, std::abs(net_in[j] - delivered[j]));
  return worst;
}

}  // namespace wdn::test
