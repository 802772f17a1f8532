#include <algorithm>

#include "wdn/episode.hpp"

namespace wdn {

double EpisodeResult::total_energy_kwh() const {
  double e = 0.0;
  for (double v : energy_kwh) e += v;
  return e;
}

ControlAction clamp_action(ControlAction action, const Network& net) {
  for (auto& [id, speed] : action.pump_speed) {
    const auto idx = net.link_index(id);
    if (!idx) continue;
    if (const auto* p = std::get_if<Pump>(&net.links()[*idx].kind))
      speed = std::clamp(speed, p->speed_min, p->speed_max);
  }
  for (auto& [id, setting] : action.valve_setting) {
    const auto idx = net.link_index(id);
    if (!idx) continue;
    if (const auto* v = std::get_if<PbvValve>(&net.links()[*idx].kind))
      setting = std::clamp(setting, v->setting_min, v->setting_max);
  }
  return action;
}

double step_energy_kwh(const Network& net, const HydraulicState& state) {
  double e = 0.0;
  for (std::size_t i : net.pumps()) e += state.pump_power[i];
  return e;
}

namespace {

ControlAction pumps_off(const Network& net) {
  ControlAction a;
  for (std::size_t i : net.controlled_pumps()) a.pump_speed[net.links()[i].id] = 0.0;
  for (std::size_t i : net.tank_pumps()) a.delegated[net.links()[i].id] = false;
  for (std::size_t i : net.valves()) {
    const auto& l = net.links()[i];
    a.valve_setting[l.id] = std::get<PbvValve>(l.kind).init_setting;
  }
  return a;
}

ControlAction pumps_at_init(const Network& net) {
  ControlAction a = pumps_off(net);
  for (std::size_t i : net.controlled_pumps()) {
    const auto& l = net.links()[i];
    a.pump_speed[l.id] = std::get<Pump>(l.kind).init_speed;
  }
  for (auto& [id, on] : a.delegated) on = true;
  return a;
}

}  // namespace

EpisodeResult simulate_episode(const HydraulicSolver& solver, const DemandDataset& demand,
                               int first_hour, int hours, Controller& controller,
                               Forecaster& forecaster, const PdaParams& pda) {
  const Network& net = solver.network();
  if (hours < 0 || first_hour < 0 || first_hour + hours > demand.hours())
    throw std::out_of_range("episode hours fall outside the demand series");
  EpisodeResult r;
  r.first_hour = first_hour;
  std::vector<double> levels = initial_tank_levels(net);

  const auto d0 = demand.node_demands(net, first_hour);
  try {
    r.initial = solver.solve(d0, pumps_off(net), levels, pda);
  } catch (const StructuralInfeasibility&) {
    // Pumps are the only supply path; start from pumps at their initial speed.
    r.initial = solver.solve(d0, pumps_at_init(net), levels, pda);
  }

  controller.reset();
  r.states.reserve(static_cast<std::size_t>(hours));
  r.actions.reserve(static_cast<std::size_t>(hours));
  r.energy_kwh.reserve(static_cast<std::size_t>(hours));
  const HydraulicState* prev = &r.initial;
  for (int t = 0; t < hours; ++t) {
    const int g = first_hour + t;
    const ForecastWindow window = forecaster.forecast(g - 1);
    StepContext ctx{&net, g % kHoursPerDay, prev, levels, &window};
    ControlAction action = clamp_action(controller.decide(ctx), net);
    HydraulicState s = solver.solve(demand.node_demands(net, g), action, levels, pda);
    levels = step_tanks(net, s, levels).levels;
    if (!s.converged) ++r.nonconverged;
    r.energy_kwh.push_back(step_energy_kwh(net, s));
    r.actions.push_back(std::move(action));
    r.states.push_back(std::move(s));
    prev = &r.states.back();
  }
  return r;
}

}  // namespace wdn
