#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "wdn/forecast.hpp"
#include "wdn/rng.hpp"

namespace wdn {

std::vector<EventRecord> select_icl_examples(std::span<const EventRecord> library,
                                             Archetype building_type, int k, std::uint64_t seed) {
  if (k < kNumLevels) throw std::invalid_argument("need at least five in-context examples");
  std::array<std::vector<const EventRecord*>, kNumLevels> pool;
  for (const auto& e : library)
    if (e.building_type == building_type && e.level >= 0 && e.level < kNumLevels)
      pool[static_cast<std::size_t>(e.level)].push_back(&e);
  for (int l = 0; l < kNumLevels; ++l)
    if (pool[static_cast<std::size_t>(l)].empty())
      throw std::invalid_argument("example library has no level " + std::to_string(l) +
                                  " entry for " + archetype_name(building_type));

  Engine eng = make_engine({seed, static_cast<std::uint64_t>(building_type), 0x69636cULL});
  for (auto& p : pool) std::shuffle(p.begin(), p.end(), eng);

  std::vector<EventRecord> out;
  std::array<std::size_t, kNumLevels> used{};
  std::array<int, kNumLevels> order;
  while (static_cast<int>(out.size()) < k) {
    std::iota(order.begin(), order.end(), 0);
    // Each round visits the levels in a shuffled, never ascending order.
    std::shuffle(order.begin(), order.end(), eng);
    if (std::is_sorted(order.begin(), order.end())) std::rotate(order.begin(), order.begin() + 1, order.end());
    for (int l : order) {
      if (static_cast<int>(out.size()) == k) break;
      const auto& p = pool[static_cast<std::size_t>(l)];
      auto& u = used[static_cast<std::size_t>(l)];
      out.push_back(*p[u++ % p.size()]);  // small pools repeat
    }
  }
  return out;
}

}  // namespace wdn
