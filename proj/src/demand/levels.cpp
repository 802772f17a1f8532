#include <algorithm>
#include <stdexcept>

#include "wdn/demand.hpp"

namespace wdn {

std::array<double, 4> compute_level_edges(std::span<const double> series) {
  double d_max = 0.0;
  for (double v : series) d_max = std::max(d_max, v);
  if (!(d_max > 0.0)) throw std::invalid_argument("demand series has no positive maximum");
  return {d_max / 16.0, d_max / 8.0, d_max / 4.0, d_max / 2.0};
}

int level_of(double demand, const std::array<double, 4>& edges) {
  int level = 0;
  while (level < 4 && demand >= edges[static_cast<std::size_t>(level)]) ++level;
  return level;
}

std::vector<int> discretize(const DemandDataset& dataset) {
  if (dataset.level_edges.size() != dataset.junctions.size())
    throw std::invalid_argument("dataset has no level edges");
  const int hours = dataset.hours();
  std::vector<int> out(dataset.values.size());
  for (std::size_t j = 0; j < dataset.junctions.size(); ++j)
    for (int t = 0; t < hours; ++t) {
      const std::size_t i = j * static_cast<std::size_t>(hours) + static_cast<std::size_t>(t);
      out[i] = level_of(dataset.values[i], dataset.level_edges[j]);
    }
  return out;
}

std::vector<int> region_levels(const DemandDataset& dataset, std::span<const int> node_levels) {
  const int regions = dataset.region_count();
  const int hours = dataset.hours();
  if (node_levels.size() != dataset.junctions.size() * static_cast<std::size_t>(hours))
    throw std::invalid_argument("node level matrix has the wrong shape");
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(regions));
  for (std::size_t j = 0; j < dataset.region.size(); ++j)
    members[static_cast<std::size_t>(dataset.region[j] - 1)].push_back(j);

  std::vector<int> out(static_cast<std::size_t>(regions) * static_cast<std::size_t>(hours), 0);
  std::vector<int> scratch;
  for (int r = 0; r < regions; ++r) {
    const auto& m = members[static_cast<std::size_t>(r)];
    if (m.empty()) continue;
    for (int t = 0; t < hours; ++t) {
      scratch.clear();
      for (std::size_t j : m)
        scratch.push_back(node_levels[j * static_cast<std::size_t>(hours) + static_cast<std::size_t>(t)]);
      const std::size_t mid = (scratch.size() - 1) / 2;
      std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid),
                       scratch.end());
      out[static_cast<std::size_t>(r) * static_cast<std::size_t>(hours) +
          static_cast<std::size_t>(t)] = scratch[mid];
    }
  }
  return out;
}

DatasetSplit split_dataset(const DemandDataset& dataset) {
  if (dataset.days <= 0) throw std::invalid_argument("dataset has no days");
  DatasetSplit s;
  s.train_days = dataset.days * 7 / 10;
  s.test_days = dataset.days - s.train_days;
  return s;
}

}  // namespace wdn
