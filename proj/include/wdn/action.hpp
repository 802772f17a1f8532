#pragma once

#include <map>
#include <string>

namespace wdn {

// Control decision for one hydraulic step.
struct ControlAction {
  std::map<std::string, double> pump_speed;     // controllable pump -> relative speed
  std::map<std::string, double> valve_setting;  // PBV -> pressure drop (psi)
  std::map<std::string, bool> delegated;        // tank pump -> on/off (rule-managed)

  bool operator==(const ControlAction&) const = default;
};

}  // namespace wdn
