#pragma once
// Hour-by-hour closed-loop simulation of one operating day.

#include <string>
#include <vector>

#include "wdn/controller.hpp"
#include "wdn/demand.hpp"
#include "wdn/forecast.hpp"
#include "wdn/hydraulics.hpp"

namespace wdn {

struct EpisodeResult {
  int first_hour = 0;                   // global hour of step 0
  HydraulicState initial;               // snapshot the first observation is built from
  std::vector<HydraulicState> states;
  std::vector<ControlAction> actions;
  std::vector<double> energy_kwh;       // per step, pumps summed in id order
  int nonconverged = 0;

  int steps() const { return static_cast<int>(states.size()); }
  double total_energy_kwh() const;
};

// Clamps every pump speed and valve setting into its bounds.
ControlAction clamp_action(ControlAction action, const Network& net);

// Energy of one solved hour: pump power summed in pump-id order, times 1 h.
double step_energy_kwh(const Network& net, const HydraulicState& state);

// Runs `hours` steps from global hour `first_hour`, starting from the
// network's initial tank levels. The forecaster is issued at g - 1 for step
// hour g, so its window covers g .. g + W - 1.
EpisodeResult simulate_episode(const HydraulicSolver& solver, const DemandDataset& demand,
                               int first_hour, int hours, Controller& controller,
                               Forecaster& forecaster, const PdaParams& pda);

// Trace CSVs: t,node_id,pressure_psi,delivered_m3s for every junction, and
// t,pump_id,speed,power_kw for every pump. t is the global hour.
void write_node_trace(const std::string& path, const Network& net,
                      const std::vector<EpisodeResult>& episodes,
                      const std::string& metadata_json);
void write_pump_trace(const std::string& path, const Network& net,
                      const std::vector<EpisodeResult>& episodes,
                      const std::string& metadata_json);

}  // namespace wdn
