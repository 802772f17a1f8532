#include <stdexcept>

#include "wdn/controller.hpp"

namespace wdn {

std::map<std::string, bool> RuleController::decide_tank_pumps(
    const Network& net, std::span<const double> tank_levels) {
  std::map<std::string, bool> out;
  for (std::size_t i : net.tank_pumps()) {
    const auto& link = net.links()[i];
    const std::size_t tank =
        net.nodes()[net.from_index(i)].is_tank() ? net.from_index(i) : net.to_index(i);
    const auto& t = std::get<Tank>(net.nodes()[tank].kind);
    const double span = t.max_level - t.min_level;
    const double fraction = span > 0.0 ? (tank_levels[tank] - t.min_level) / span : 0.5;
    auto it = tank_pump_on_.try_emplace(link.id, true).first;
    if (fraction < config_.tank_on_fraction)
      it->second = true;
    else if (fraction > config_.tank_off_fraction)
      it->second = false;
    out[link.id] = it->second;
  }
  return out;
}

ControlAction RuleController::decide(const StepContext& ctx) {
  if (!ctx.net || !ctx.previous) throw std::invalid_argument("rule controller needs a state");
  const Network& net = *ctx.net;
  ControlAction a;
  const bool short_supply = ctx.previous->total_delivered() <
                            config_.satisfaction_ratio * ctx.previous->total_requested();
  for (std::size_t i : net.controlled_pumps())
    a.pump_speed[net.links()[i].id] = short_supply ? config_.boost_speed : config_.idle_speed;
  for (std::size_t i : net.valves()) {
    const auto& link = net.links()[i];
    a.valve_setting[link.id] = std::get<PbvValve>(link.kind).init_setting;
  }
  a.delegated = decide_tank_pumps(net, ctx.tank_levels);
  return a;
}

PolicyController::PolicyController(PolicyParams params, RuleConfig rule)
    : params_(std::move(params)), rule_(rule) {}

ControlAction PolicyController::decide(const StepContext& ctx) {
  if (!ctx.net || !ctx.previous || !ctx.forecast)
    throw std::invalid_argument("policy controller needs a state and a forecast");
  const auto obs = build_observation(*ctx.net, *ctx.previous, ctx.hour, *ctx.forecast);
  const auto raw = policy_forward(params_, obs);
  ControlAction a = map_to_action_bounds(raw, *ctx.net);
  a.delegated = rule_.decide_tank_pumps(*ctx.net, ctx.tank_levels);
  return a;
}

}  // namespace wdn
