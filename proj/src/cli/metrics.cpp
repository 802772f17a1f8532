#include <cstring>
#include <stdexcept>

#include "wdn/metrics.hpp"

namespace wdn {

Metrics compute_metrics(const std::vector<EpisodeResult>& episodes, const Network& net,
                        const LossConfig& cfg) {
  if (episodes.empty()) throw std::invalid_argument("metrics need at least one episode");
  std::vector<char> counted(net.nodes().size(), 0);
  for (std::size_t i : evaluation_nodes(net, cfg.pool_all_junctions)) counted[i] = 1;

  struct Acc {
    double dev = 0.0;
    long long over = 0, under = 0, n = 0;
  };
  Acc total;
  std::map<std::size_t, Acc> node;
  double energy = 0.0;
  long long hours = 0, nonconverged = 0;
  for (const auto& ep : episodes) {
    for (int t = 0; t < ep.steps(); ++t) {
      const auto& s = ep.states[static_cast<std::size_t>(t)];
      for (std::size_t i : net.junction_indices()) {
        if (!counted[i]) continue;
        const double h = s.pressures[i];
        const double d = (h - cfg.h_star) / cfg.h_star;
        auto& a = node[i];
        for (Acc* acc : {&total, &a}) {
          acc->dev += d * d;
          acc->over += h > cfg.h_max;
          acc->under += h < cfg.h_min;
          ++acc->n;
        }
      }
      energy += ep.energy_kwh[static_cast<std::size_t>(t)];
      ++hours;
    }
    nonconverged += ep.nonconverged;
  }
  if (total.n == 0) throw std::invalid_argument("metrics need at least one node-hour");

  Metrics m;
  m.node_hours = total.n;
  m.hours = hours;
  m.nonconverged_steps = nonconverged;
  m.p_mse = total.dev / static_cast<double>(total.n);
  m.max_viol_rate = static_cast<double>(total.over) / static_cast<double>(total.n);
  m.min_viol_rate = static_cast<double>(total.under) / static_cast<double>(total.n);
  m.energy_kwh_per_hour = energy / static_cast<double>(hours);
  for (const auto& [i, a] : node) {
    NodeMetrics nm;
    nm.node_hours = a.n;
    nm.p_mse = a.dev / static_cast<double>(a.n);
    nm.max_viol_rate = static_cast<double>(a.over) / static_cast<double>(a.n);
    nm.min_viol_rate = static_cast<double>(a.under) / static_cast<double>(a.n);
    nm.energy_kwh_per_hour = m.energy_kwh_per_hour;
    m.per_node[net.nodes()[i].id] = nm;
  }
  return m;
}

std::uint64_t episode_demand_hash(const DemandDataset& demand, int first_hour, int hours) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t j = 0; j < demand.junctions.size(); ++j) {
    mix(demand.junctions[j].data(), demand.junctions[j].size());
    for (int t = first_hour; t < first_hour + hours; ++t) {
      const double v = demand.value(j, t);
      mix(&v, sizeof v);
    }
  }
  return h;
}

}  // namespace wdn
