#pragma once
// Evaluation metrics over simulated episodes.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wdn/episode.hpp"
#include "wdn/training.hpp"

namespace wdn {

struct NodeMetrics {
  double p_mse = 0.0;
  double max_viol_rate = 0.0;
  double min_viol_rate = 0.0;
  double energy_kwh_per_hour = 0.0;  // network-wide
  long long node_hours = 0;
};

struct Metrics {
  double p_mse = 0.0;
  double max_viol_rate = 0.0;  // share of node-hours strictly above h_max
  double min_viol_rate = 0.0;  // share strictly below h_min
  double energy_kwh_per_hour = 0.0;
  long long node_hours = 0;
  long long hours = 0;
  long long nonconverged_steps = 0;
  std::map<std::string, NodeMetrics> per_node;
};

// Sums run episode by episode, hour by hour, and over junctions in network
// declaration order (the node trace order), skipping junctions outside the
// evaluation set. Energy sums each hour's pumps in id order first.
Metrics compute_metrics(const std::vector<EpisodeResult>& episodes, const Network& net,
                        const LossConfig& cfg);

// FNV-1a over the demand values an episode consumes.
std::uint64_t episode_demand_hash(const DemandDataset& demand, int first_hour, int hours);

}  // namespace wdn
