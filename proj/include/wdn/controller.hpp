#pragma once
// Rule-based baseline and the feedforward pump/valve policy.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wdn/action.hpp"
#include "wdn/forecast_window.hpp"
#include "wdn/hydraulics.hpp"
#include "wdn/network.hpp"

namespace wdn {

inline constexpr double kNominalPressurePsi = 60.0;

struct PolicyDims {
  int input = 0;
  int hidden = 64;
  int output = 0;

  int parameter_count() const { return hidden * input + hidden + hidden * hidden + hidden +
                                       output * hidden + output; }
  bool operator==(const PolicyDims&) const = default;
};

// Input: interest pressures, (sin, cos) of the hour, window x regions levels.
// Output: controlled pumps then valves, each sorted by id.
PolicyDims policy_dims(const Network& net, int window, int hidden = 64);

// Three dense layers over a flat parameter vector laid out as
// W1 (hidden x input, row-major), b1, W2, b2, W3, b3.
class PolicyParams {
 public:
  PolicyParams() = default;
  PolicyParams(PolicyDims dims, std::vector<double> theta);

  const PolicyDims& dims() const { return dims_; }
  std::span<const double> flatten() const { return theta_; }
  std::span<double> mutable_theta() { return theta_; }
  static PolicyParams unflatten(PolicyDims dims, std::span<const double> theta);

  std::span<const double> w1() const;
  std::span<const double> b1() const;
  std::span<const double> w2() const;
  std::span<const double> b2() const;
  std::span<const double> w3() const;
  std::span<const double> b3() const;

  bool operator==(const PolicyParams&) const = default;

 private:
  PolicyDims dims_;
  std::vector<double> theta_;
};

// Xavier-uniform weights, zero biases.
PolicyParams init_policy(PolicyDims dims, std::uint64_t seed);

std::vector<double> policy_forward(const PolicyParams& params, std::span<const double> obs);

std::vector<double> build_observation(const Network& net, const HydraulicState& state,
                                      int hour, const ForecastWindow& forecast);

// lo + logistic(raw) * (hi - lo) per component.
ControlAction map_to_action_bounds(std::span<const double> raw, const Network& net);

// True when every pump speed and valve setting lies within its bounds and
// the action names exactly the network's controllable components.
bool action_within_bounds(const ControlAction& action, const Network& net);

struct RuleConfig {
  double tank_on_fraction = 0.4;
  double tank_off_fraction = 0.9;
  double satisfaction_ratio = 0.98;
  double boost_speed = 1.0;
  double idle_speed = 0.3;
  double tank_pump_speed = 1.0;
};

struct StepContext {
  const Network* net = nullptr;
  int hour = 0;                         // hour of the episode day
  const HydraulicState* previous = nullptr;
  std::span<const double> tank_levels;  // per node index
  const ForecastWindow* forecast = nullptr;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual void reset() = 0;
  virtual ControlAction decide(const StepContext& ctx) = 0;
};

class RuleController : public Controller {
 public:
  explicit RuleController(RuleConfig config = {}) : config_(config) {}
  void reset() override { tank_pump_on_.clear(); }
  ControlAction decide(const StepContext& ctx) override;

  // Tank-pump hysteresis alone; used by the policy controller.
  std::map<std::string, bool> decide_tank_pumps(const Network& net,
                                                std::span<const double> tank_levels);

  const RuleConfig& config() const { return config_; }

 private:
  RuleConfig config_;
  std::map<std::string, bool> tank_pump_on_;
};

// Neural policy for source pumps and valves; tank pumps follow the rule.
class PolicyController : public Controller {
 public:
  explicit PolicyController(PolicyParams params, RuleConfig rule = {});
  void reset() override { rule_.reset(); }
  ControlAction decide(const StepContext& ctx) override;

  const PolicyParams& params() const { return params_; }

 private:
  PolicyParams params_;
  RuleController rule_;
};

struct CheckpointInfo {
  PolicyParams params;
  int window = 0;
  std::uint64_t seed = 0;
  std::string config_json;  // free-form config snapshot
};

void save_checkpoint(const std::string& path, const CheckpointInfo& info);
CheckpointInfo load_checkpoint(const std::string& path);

}  // namespace wdn
