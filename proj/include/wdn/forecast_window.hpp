#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wdn {

// Demand-level forecast per region for the hours after `issue_hour`.
struct ForecastWindow {
  int issue_hour = 0;
  int window = 0;
  std::vector<std::vector<int>> levels;  // [region - 1][k], k = 0..window-1

  bool operator==(const ForecastWindow&) const = default;

  void validate(int regions) const {
    if (window != 0 && window != 2 && window != 4 && window != 6)
      throw std::invalid_argument("forecast window must be 0, 2, 4 or 6");
    if (static_cast<int>(levels.size()) != regions)
      throw std::invalid_argument("forecast covers " + std::to_string(levels.size()) +
                                  " regions, expected " + std::to_string(regions));
    for (const auto& seq : levels) {
      if (static_cast<int>(seq.size()) != window)
        throw std::invalid_argument("forecast sequence length differs from window");
      for (int l : seq)
        if (l < 0 || l > 4) throw std::invalid_argument("forecast level outside 0..4");
    }
  }
};

inline bool valid_window(int w) { return w == 0 || w == 2 || w == 4 || w == 6; }

}  // namespace wdn
