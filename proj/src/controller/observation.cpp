#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wdn/controller.hpp"

namespace wdn {

std::vector<double> build_observation(const Network& net, const HydraulicState& state, int hour,
                                      const ForecastWindow& forecast) {
  forecast.validate(net.region_count());
  std::vector<double> obs;
  obs.reserve(net.interest_nodes().size() + 2 +
              static_cast<std::size_t>(forecast.window * net.region_count()));
  for (const auto& id : net.interest_nodes()) {
    const auto idx = net.node_index(id);
    if (!idx || *idx >= state.pressures.size())
      throw std::invalid_argument("state has no pressure for interest node " + id);
    obs.push_back(state.pressures[*idx] / kNominalPressurePsi);
  }
  const double phase = 2.0 * std::numbers::pi * hour / 24.0;
  obs.push_back(std::sin(phase));
  obs.push_back(std::cos(phase));
  for (const auto& seq : forecast.levels)
    for (int l : seq) obs.push_back(l / 4.0);
  return obs;
}

}  // namespace wdn
