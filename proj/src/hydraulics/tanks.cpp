#include <algorithm>

#include "wdn/hydraulics.hpp"

namespace wdn {

double tank_net_inflow(const Network& net, const HydraulicState& state, std::size_t tank) {
  double q = 0.0;
  for (std::size_t k = 0; k < net.links().size(); ++k) {
    if (net.to_index(k) == tank) q += state.flows[k];
    if (net.from_index(k) == tank) q -= state.flows[k];
  }
  return q;
}

TankUpdate step_tanks(const Network& net, const HydraulicState& state,
                      std::span<const double> levels, double dt_seconds) {
  if (!(dt_seconds > 0.0)) throw std::invalid_argument("tank step needs dt > 0");
  TankUpdate out;
  out.levels.assign(levels.begin(), levels.end());
  out.full.assign(levels.size(), false);
  out.empty.assign(levels.size(), false);
  for (std::size_t i = 0; i < net.nodes().size(); ++i) {
    const auto* t = std::get_if<Tank>(&net.nodes()[i].kind);
    if (!t) continue;
    const double q = tank_net_inflow(net, state, i);
    const double raw = levels[i] + q * dt_seconds / t->area();
    out.levels[i] = std::clamp(raw, t->min_level, t->max_level);
    out.full[i] = raw >= t->max_level;
    out.empty[i] = raw <= t->min_level;
  }
  return out;
}

std::vector<double> initial_tank_levels(const Network& net) {
  std::vector<double> levels(net.nodes().size(), 0.0);
  for (std::size_t i = 0; i < net.nodes().size(); ++i)
    if (const auto* t = std::get_if<Tank>(&net.nodes()[i].kind)) levels[i] = t->init_level;
  return levels;
}

}  // namespace wdn
