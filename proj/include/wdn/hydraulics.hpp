#pragma once
// Steady-state network hydraulics with pressure-driven demand.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wdn/action.hpp"
#include "wdn/network.hpp"

namespace wdn {

// Head gain h(q) = h0 - r q^n at nominal speed, SI units.
struct PumpModel {
  double h0 = 0.0;
  double r = 0.0;
  double n = 1.0;
  double efficiency = 0.75;
};

// Exact three-point fit through (0, H1), (Q2, H2), (Q3, H3).
PumpModel fit_pump_curve(std::span<const std::pair<double, double>> points);

// Affinity-law head gain at relative speed `speed`, floored at zero.
double pump_head(const PumpModel& model, double q, double speed);

// Fits the pump's curve after converting it to SI. Accepts the three-point
// form (first flow zero) and EPANET's single-point form.
PumpModel pump_model_for(const Network& net, const Pump& pump);

struct PdaParams {
  double p_min = 0.0;   // psi
  double p_req = 60.0;  // psi
  double p_exp = 0.5;
  double smoothing_eps = 0.5;  // psi

  void validate() const;
};

// Fraction of requested demand delivered at `pressure` psi (Wagner form with
// cubic C1 blends inside smoothing_eps of both breakpoints).
double pda_factor(double pressure, const PdaParams& params);
// d(pda_factor)/d(pressure), per psi.
double pda_slope(double pressure, const PdaParams& params);

// Per-step solver output. Vectors are indexed like Network::nodes() / links().
struct HydraulicState {
  std::vector<double> heads;       // m
  std::vector<double> pressures;   // psi; junction: head - elevation, tank: level
  std::vector<double> requested;   // m^3/s, junctions only
  std::vector<double> delivered;   // m^3/s, junctions only
  std::vector<double> flows;       // m^3/s, positive from -> to
  std::vector<double> pump_gain;   // m, pumps only
  std::vector<double> pump_power;  // kW, pumps only
  std::vector<double> setting;     // applied pump speed (0 if off) or valve psi
  std::vector<bool> open;          // final link status
  bool converged = false;
  int iterations = 0;
  double max_residual = 0.0;       // m^3/s
  double relative_flow_change = 0.0;

  double pressure(const Network& net, const std::string& node_id) const;
  double flow(const Network& net, const std::string& link_id) const;
  double total_requested() const;
  double total_delivered() const;
  double total_pump_power() const;  // kW, summed in link order
};

class StructuralInfeasibility : public std::runtime_error {
 public:
  explicit StructuralInfeasibility(const std::string& junction_id);
  const std::string& junction_id() const { return junction_; }

 private:
  std::string junction_;
};

struct SolverOptions {
  int max_iterations = 200;
  double flow_tolerance = 1e-3;      // sum|dq| / sum|q|
  double residual_tolerance = 1e-6;  // m^3/s
  double damping = 0.6;
  double pump_efficiency = 0.75;
};

// Global-gradient (Todini) solver bound to one network. Stateless between
// calls; safe to share across threads.
class HydraulicSolver {
 public:
  explicit HydraulicSolver(const Network& net, SolverOptions options = {});

  // demands: requested demand per node index (junctions only, m^3/s).
  // tank_levels: level per node index (tanks only, m).
  HydraulicState solve(std::span<const double> demands, const ControlAction& action,
                       std::span<const double> tank_levels, const PdaParams& pda) const;

  const Network& network() const { return *net_; }
  const SolverOptions& options() const { return options_; }
  const PumpModel& pump_model(std::size_t link) const { return pumps_[link]; }

 private:
  struct Problem;
  void newton(Problem& p, int& budget) const;

  const Network* net_;
  SolverOptions options_;
  std::vector<double> pipe_r_;      // Hazen-Williams resistance
  std::vector<double> minor_m_;     // minor-loss coefficient
  std::vector<PumpModel> pumps_;    // per link (pumps only)
};

HydraulicState solve_snapshot(const Network& net, std::span<const double> demands,
                              const ControlAction& action,
                              std::span<const double> tank_levels, const PdaParams& pda);

struct TankUpdate {
  std::vector<double> levels;  // per node index
  std::vector<bool> full;      // clamped at max_level this step
  std::vector<bool> empty;     // clamped at min_level this step
};

// Net inflow into each tank (m^3/s) from a solved state.
double tank_net_inflow(const Network& net, const HydraulicState& state, std::size_t tank);

TankUpdate step_tanks(const Network& net, const HydraulicState& state,
                      std::span<const double> levels, double dt_seconds = 3600.0);

// Initial tank levels per node index.
std::vector<double> initial_tank_levels(const Network& net);

}  // namespace wdn
