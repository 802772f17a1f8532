#include <cmath>
#include <stdexcept>

#include "wdn/controller.hpp"

namespace wdn {

namespace {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

ControlAction map_to_action_bounds(std::span<const double> raw, const Network& net) {
  const auto& pumps = net.controlled_pumps();
  const auto& valves = net.valves();
  if (raw.size() != pumps.size() + valves.size())
    throw std::invalid_argument("raw action has " + std::to_string(raw.size()) +
                                " entries, expected " +
                                std::to_string(pumps.size() + valves.size()));
  ControlAction a;
  std::size_t k = 0;
  for (std::size_t i : pumps) {
    const auto& link = net.links()[i];
    const auto& p = std::get<Pump>(link.kind);
    a.pump_speed[link.id] = p.speed_min + logistic(raw[k++]) * (p.speed_max - p.speed_min);
  }
  for (std::size_t i : valves) {
    const auto& link = net.links()[i];
    const auto& v = std::get<PbvValve>(link.kind);
    a.valve_setting[link.id] =
        v.setting_min + logistic(raw[k++]) * (v.setting_max - v.setting_min);
  }
  return a;
}

bool action_within_bounds(const ControlAction& action, const Network& net) {
  if (action.pump_speed.size() != net.controlled_pumps().size() ||
      action.valve_setting.size() != net.valves().size())
    return false;
  for (std::size_t i : net.controlled_pumps()) {
    const auto& link = net.links()[i];
    const auto& p = std::get<Pump>(link.kind);
    auto it = action.pump_speed.find(link.id);
    if (it == action.pump_speed.end() || !(it->second >= p.speed_min && it->second <= p.speed_max))
      return false;
  }
  for (std::size_t i : net.valves()) {
    const auto& link = net.links()[i];
    const auto& v = std::get<PbvValve>(link.kind);
    auto it = action.valve_setting.find(link.id);
    if (it == action.valve_setting.end() ||
        !(it->second >= v.setting_min && it->second <= v.setting_max))
      return false;
  }
  for (const auto& [id, on] : action.delegated) {
    (void)on;
    if (!net.link_index(id) || !net.is_tank_pump(*net.link_index(id))) return false;
  }
  return true;
}

}  // namespace wdn
