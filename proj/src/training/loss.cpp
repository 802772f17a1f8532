#include <algorithm>
#include <stdexcept>

#include "wdn/training.hpp"

namespace wdn {

void LossConfig::validate() const {
  if (gamma1 < 0 || gamma2 < 0 || lambda_max < 0 || lambda_min < 0 ||
      nonconvergence_surcharge < 0)
    throw std::invalid_argument("loss weights must be >= 0");
  if (!(h_min < h_star && h_star < h_max))
    throw std::invalid_argument("loss pressures must satisfy h_min < h_star < h_max");
}

std::vector<std::size_t> evaluation_nodes(const Network& net, bool pool_all_junctions) {
  if (pool_all_junctions) return net.junction_indices();
  std::vector<std::size_t> out;
  for (const auto& id : net.interest_nodes()) out.push_back(*net.node_index(id));
  return out;
}

LossBreakdown episode_loss(const EpisodeResult& result, const Network& net,
                           const LossConfig& cfg) {
  const auto nodes = evaluation_nodes(net, cfg.pool_all_junctions);
  if (result.states.empty() || nodes.empty())
    throw std::invalid_argument("episode loss needs at least one step and one node");
  double dev = 0.0, over = 0.0, under = 0.0;
  for (const auto& s : result.states)
    for (std::size_t i : nodes) {
      const double h = s.pressures[i];
      const double d = (h - cfg.h_star) / cfg.h_star;
      const double o = std::max(0.0, (h - cfg.h_max) / cfg.h_star);
      const double u = std::max(0.0, (cfg.h_min - h) / cfg.h_star);
      dev += d * d;
      over += o * o;
      under += u * u;
    }
  const double n = static_cast<double>(result.states.size() * nodes.size());
  LossBreakdown b;
  b.pressure = cfg.gamma1 * dev / n;
  b.energy = cfg.gamma2 * result.total_energy_kwh();
  b.max_barrier = cfg.lambda_max * over / n;
  b.min_barrier = cfg.lambda_min * under / n;
  b.surcharge = cfg.nonconvergence_surcharge * result.nonconverged;
  b.total = b.pressure + b.energy + b.max_barrier + b.min_barrier + b.surcharge;
  return b;
}

}  // namespace wdn
