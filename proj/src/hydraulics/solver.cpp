// Global-gradient solver: Newton on junction heads with per-link
// linearization q' = q - y + p (H_from - H_to), where p = 1/(dh/dq) and
// y = p h(q). Pressure-driven demand enters the nodal balance through its
// own linearization, so the head matrix stays symmetric positive definite.
// Open PBVs are not links in that matrix but fixed head offsets between their
// end nodes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include <Eigen/Dense>

#include "wdn/hydraulics.hpp"
#include "wdn/units.hpp"

namespace wdn {

namespace {

constexpr double kHwCoefficient = 10.667;
constexpr double kHwExponent = 1.852;
constexpr double kMinGradient = 1e-7;  // floor on dh/dq
// Below this |q| pipe loss follows an odd cubic matched in value and slope,
// so dh/dq stays bounded away from zero.
constexpr double kPipeBlendFlow = 1e-4;
// Newton passes longer than this relax every step to break limit cycles.
constexpr int kStallIterations = 25;
constexpr double kStallRelaxation = 0.5;
// Once converged, a few more full steps drive the iterate to round-off so the
// answer does not depend on the path taken.
constexpr int kPolishIterations = 3;
constexpr double kPolishTolerance = 1e-10;
constexpr double kValveGradient = 1e-6;  // dh/dq of an active PBV
constexpr double kPumpFlowFloor = 1e-6;
constexpr double kLevelTol = 1e-9;

struct Linearization {
  double loss;      // head loss from -> to (m)
  double gradient;  // d loss / d q
};

}  // namespace

StructuralInfeasibility::StructuralInfeasibility(const std::string& junction_id)
    : std::runtime_error("structural infeasibility: junction " + junction_id +
                         " has no open path to a fixed-head node"),
      junction_(junction_id) {}

double HydraulicState::pressure(const Network& net, const std::string& node_id) const {
  auto idx = net.node_index(node_id);
  if (!idx) throw std::out_of_range("unknown node " + node_id);
  return pressures[*idx];
}

double HydraulicState::flow(const Network& net, const std::string& link_id) const {
  auto idx = net.link_index(link_id);
  if (!idx) throw std::out_of_range("unknown link " + link_id);
  return flows[*idx];
}

double HydraulicState::total_requested() const {
  return std::accumulate(requested.begin(), requested.end(), 0.0);
}

double HydraulicState::total_delivered() const {
  return std::accumulate(delivered.begin(), delivered.end(), 0.0);
}

double HydraulicState::total_pump_power() const {
  // pump_power is zero for non-pump links; callers needing id order use
  // Network::pumps().
  return std::accumulate(pump_power.begin(), pump_power.end(), 0.0);
}

struct HydraulicSolver::Problem {
  std::span<const double> demands;
  const PdaParams* pda = nullptr;
  std::vector<double> heads;
  std::vector<double> flows;
  std::vector<double> speed;      // pumps
  std::vector<double> valve_m;    // PBV drop in meters
  std::vector<char> active;       // link usable this snapshot
  std::vector<char> tank_full;
  std::vector<char> tank_empty;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double relative_change = 0.0;
};

HydraulicSolver::HydraulicSolver(const Network& net, SolverOptions options)
    : net_(&net), options_(options) {
  const auto& links = net.links();
  pipe_r_.assign(links.size(), 0.0);
  minor_m_.assign(links.size(), 0.0);
  pumps_.assign(links.size(), PumpModel{});
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (const auto* p = std::get_if<Pipe>(&links[k].kind)) {
      pipe_r_[k] = kHwCoefficient * std::pow(p->roughness, -kHwExponent) *
                   std::pow(p->diameter, -4.871) * p->length;
      minor_m_[k] = 8.0 * p->minor_loss /
                    (units::kGravity * M_PI * M_PI * std::pow(p->diameter, 4));
    } else if (const auto* v = std::get_if<PbvValve>(&links[k].kind)) {
      minor_m_[k] = 8.0 * v->minor_loss /
                    (units::kGravity * M_PI * M_PI * std::pow(v->diameter, 4));
    } else {
      pumps_[k] = pump_model_for(net, std::get<Pump>(links[k].kind));
      pumps_[k].efficiency = options_.pump_efficiency;
    }
  }
}

namespace {

// First junction with no active path to a fixed-head node, if any.
std::optional<std::size_t> isolated_junction(const Network& net, const std::vector<char>& active) {
  const std::size_t n = net.nodes().size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t k = 0; k < net.links().size(); ++k) {
    if (!active[k]) continue;
    adj[net.from_index(k)].push_back(net.to_index(k));
    adj[net.to_index(k)].push_back(net.from_index(k));
  }
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i)
    if (net.nodes()[i].is_fixed_head()) {
      seen[i] = 1;
      frontier.push(i);
    }
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop();
    for (std::size_t j : adj[i])
      if (!seen[j] && !net.nodes()[j].is_fixed_head()) {
        seen[j] = 1;
        frontier.push(j);
      }
  }
  for (std::size_t j : net.junction_indices())
    if (!seen[j]) return j;
  return std::nullopt;
}

}  // namespace

namespace {

// Active PBVs whose endpoints can be tied together: the downstream head is
// the upstream head minus the valve drop, so each tree of such valves is one
// unknown (or fully known when it holds a fixed-head node). The valve flows
// follow from mass balance on the tree.
struct Elimination {
  struct Step {
    std::size_t node, parent, valve;
  };
  std::vector<int> unknown;        // per node: unknown index, -1 if head is known
  std::vector<std::size_t> root;   // per node
  std::vector<char> tree;          // per link: eliminated valve
  std::vector<Step> order;         // breadth-first from each root
  int count = 0;
};

Elimination eliminate_valves(const Network& net, const std::vector<char>& active) {
  const auto& nodes = net.nodes();
  const auto& links = net.links();
  const std::size_t n = nodes.size();
  Elimination e;
  e.tree.assign(links.size(), 0);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<char> fixed(n);
  for (std::size_t i = 0; i < n; ++i) fixed[i] = nodes[i].is_fixed_head();
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (!active[k] || !links[k].is_valve()) continue;
    const std::size_t a = find(net.from_index(k)), b = find(net.to_index(k));
    if (a == b || (fixed[a] && fixed[b])) continue;  // stays a stiff link
    parent[b] = a;
    fixed[a] = fixed[a] || fixed[b];
    e.tree[k] = 1;
    adj[net.from_index(k)].push_back(k);
    adj[net.to_index(k)].push_back(k);
  }

  // Root: the fixed-head member if any, else the first junction.
  std::vector<std::size_t> root_of_set(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = find(i);
    if (root_of_set[s] == n || (nodes[i].is_fixed_head() && !nodes[root_of_set[s]].is_fixed_head()))
      root_of_set[s] = i;
  }
  e.unknown.assign(n, -1);
  e.root.assign(n, 0);
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root_of_set[find(i)];
    if (seen[r]) continue;
    seen[r] = 1;
    const int u = nodes[r].is_fixed_head() ? -1 : e.count++;
    e.unknown[r] = u;
    e.root[r] = r;
    for (std::size_t head = e.order.size(), at = r;;) {
      for (std::size_t k : adj[at]) {
        const std::size_t other = net.from_index(k) == at ? net.to_index(k) : net.from_index(k);
        if (seen[other]) continue;
        seen[other] = 1;
        e.unknown[other] = u;
        e.root[other] = r;
        e.order.push_back({other, at, k});
      }
      if (head == e.order.size()) break;
      at = e.order[head++].node;
    }
  }
  return e;
}

}  // namespace

void HydraulicSolver::newton(Problem& p, int& budget) const {
  const Network& net = *net_;
  const auto& nodes = net.nodes();
  const auto& links = net.links();
  const PdaParams& pda = *p.pda;
  const Elimination elim = eliminate_valves(net, p.active);

  std::vector<double> grad(links.size()), loss(links.size());
  Eigen::MatrixXd a(elim.count, elim.count);
  Eigen::VectorXd f(elim.count);
  std::vector<double> new_flows(links.size());
  std::vector<double> offset(nodes.size(), 0.0);  // head relative to the tree root
  std::vector<double> balance(nodes.size());
  std::vector<double> old_heads;

  auto linearize = [&](std::size_t k, double q) -> Linearization {
    const Link& l = links[k];
    if (l.is_pipe()) {
      const double aq = std::abs(q);
      const double m = minor_m_[k];
      if (aq < kPipeBlendFlow) {
        const double qt = kPipeBlendFlow;
        const double hw_t = pipe_r_[k] * std::pow(qt, kHwExponent - 1.0);
        const double mean = hw_t + m * qt;                     // loss(qt) / qt
        const double slope = kHwExponent * hw_t + 2.0 * m * qt;  // loss'(qt)
        const double b = 0.5 * (slope - mean) / (qt * qt);
        const double a = mean - b * qt * qt;
        const double g = std::max(a + 3.0 * b * q * q, kMinGradient);
        return {q * (a + b * q * q), g};
      }
      const double hw = pipe_r_[k] * std::pow(aq, kHwExponent - 1.0);
      return {hw * q + m * aq * q, kHwExponent * hw + 2.0 * m * aq};
    }
    if (l.is_valve()) {
      const double g = kValveGradient + 2.0 * minor_m_[k] * std::abs(q);
      return {p.valve_m[k] + kValveGradient * q + minor_m_[k] * std::abs(q) * q, g};
    }
    const PumpModel& m = pumps_[k];
    const double w = p.speed[k];
    const double c = m.r * std::pow(w, 2.0 - m.n);
    const double qe = std::max(q, kPumpFlowFloor);
    const double g = std::max(c * m.n * std::pow(qe, m.n - 1.0), kMinGradient);
    const double at_qe = -(w * w * m.h0 - c * std::pow(qe, m.n));
    return {at_qe + g * (q - qe), g};
  };

  auto delivered_at = [&](std::size_t node, double head) {
    const double pressure = units::head_m_to_psi(head - nodes[node].elevation());
    return p.demands[node] * pda_factor(pressure, pda);
  };

  auto residual_of = [&](const std::vector<double>& heads, const std::vector<double>& flows) {
    std::fill(balance.begin(), balance.end(), 0.0);
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (!p.active[k]) continue;
      balance[net.from_index(k)] -= flows[k];
      balance[net.to_index(k)] += flows[k];
    }
    double worst = 0.0;
    for (std::size_t j : net.junction_indices())
      worst = std::max(worst, std::abs(balance[j] - delivered_at(j, heads[j])));
    return worst;
  };

  // Heads of tied nodes follow their root; only the roots carry information.
  auto spread_heads = [&](std::vector<double>& heads) {
    for (const auto& s : elim.order) heads[s.node] = heads[elim.root[s.node]] + offset[s.node];
  };

  auto update_flows = [&](const std::vector<double>& heads) {
    std::fill(balance.begin(), balance.end(), 0.0);
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (!p.active[k] || elim.tree[k]) {
        new_flows[k] = 0.0;
        continue;
      }
      const double pk = 1.0 / grad[k];
      const double dh = heads[net.from_index(k)] - heads[net.to_index(k)];
      new_flows[k] = p.flows[k] - pk * loss[k] + pk * dh;
      balance[net.from_index(k)] -= new_flows[k];
      balance[net.to_index(k)] += new_flows[k];
    }
    for (const auto& s : elim.order) balance[s.node] -= delivered_at(s.node, heads[s.node]);
    for (auto it = elim.order.rbegin(); it != elim.order.rend(); ++it) {
      const std::size_t k = it->valve;
      const double q = net.to_index(k) == it->node ? -balance[it->node] : balance[it->node];
      new_flows[k] = q;
      balance[net.from_index(k)] -= q;
      balance[net.to_index(k)] += q;
    }
  };

  double previous_residual = std::numeric_limits<double>::infinity();
  p.converged = false;
  int pass_iterations = 0;
  int polish_left = kPolishIterations;
  while (budget > 0) {
    --budget;
    ++p.iterations;
    ++pass_iterations;

    for (const auto& s : elim.order) {
      const std::size_t k = s.valve;
      const double q = p.flows[k];
      const double drop = p.valve_m[k] + minor_m_[k] * std::abs(q) * q;
      offset[s.node] = offset[s.parent] + (net.from_index(k) == s.parent ? -drop : drop);
    }
    spread_heads(p.heads);

    a.setZero();
    f.setZero();
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (!p.active[k] || elim.tree[k]) continue;
      const auto lin = linearize(k, p.flows[k]);
      grad[k] = lin.gradient;
      loss[k] = lin.loss;
      const double pk = 1.0 / lin.gradient;
      const double carry = p.flows[k] - pk * lin.loss;
      const std::size_t from = net.from_index(k), to = net.to_index(k);
      const int uf = elim.unknown[from], ut = elim.unknown[to];
      // Head difference = H_uf - H_ut + known.
      const double known = (uf >= 0 ? offset[from] : p.heads[from]) -
                           (ut >= 0 ? offset[to] : p.heads[to]);
      if (uf >= 0) {
        a(uf, uf) += pk;
        if (ut >= 0) a(uf, ut) -= pk;
        f(uf) -= carry + pk * known;
      }
      if (ut >= 0) {
        a(ut, ut) += pk;
        if (uf >= 0) a(ut, uf) -= pk;
        f(ut) += carry + pk * known;
      }
    }
    for (std::size_t j : net.junction_indices()) {
      const int row = elim.unknown[j];
      if (row < 0) continue;
      const double h = p.heads[j];
      const double pressure = units::head_m_to_psi(h - nodes[j].elevation());
      const double d0 = p.demands[j] * pda_factor(pressure, pda);
      const double dd = p.demands[j] * pda_slope(pressure, pda) / units::kMetersPerPsi;
      a(row, row) += dd;
      f(row) += -d0 + dd * (h - offset[j]);
    }

    Eigen::VectorXd x;
    if (elim.count > 0) {
      Eigen::LLT<Eigen::MatrixXd> llt(a);
      x = llt.info() == Eigen::Success ? Eigen::VectorXd(llt.solve(f)) : Eigen::VectorXd(a.ldlt().solve(f));
    }

    old_heads = p.heads;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (elim.root[i] == i && elim.unknown[i] >= 0) p.heads[i] = x(elim.unknown[i]);
    spread_heads(p.heads);
    update_flows(p.heads);
    double residual = residual_of(p.heads, new_flows);
    double relax = 1.0;
    if (residual > previous_residual && residual > options_.residual_tolerance &&
        options_.damping > 0.0 && options_.damping < 1.0)
      relax = options_.damping;
    if (pass_iterations > kStallIterations) relax = std::min(relax, kStallRelaxation);
    if (relax < 1.0) {
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (elim.root[i] == i && elim.unknown[i] >= 0)
          p.heads[i] = old_heads[i] + relax * (p.heads[i] - old_heads[i]);
      spread_heads(p.heads);
      update_flows(p.heads);
      residual = residual_of(p.heads, new_flows);
    }

    double change = 0.0, total = 0.0;
    for (std::size_t k = 0; k < links.size(); ++k) {
      change += std::abs(new_flows[k] - p.flows[k]);
      total += std::abs(new_flows[k]);
    }
    p.flows = new_flows;
    p.relative_change = total > 0.0 ? change / total : change;
    p.residual = residual;
    previous_residual = residual;
    if (p.relative_change < options_.flow_tolerance && residual < options_.residual_tolerance) {
      p.converged = true;
      if (p.relative_change < kPolishTolerance || polish_left-- == 0) return;
    } else {
      p.converged = false;
    }
  }
}

HydraulicState HydraulicSolver::solve(std::span<const double> demands,
                                      const ControlAction& action,
                                      std::span<const double> tank_levels,
                                      const PdaParams& pda) const {
  const Network& net = *net_;
  const auto& nodes = net.nodes();
  const auto& links = net.links();
  if (demands.size() != nodes.size() || tank_levels.size() != nodes.size())
    throw std::invalid_argument("demand and tank-level vectors must have one entry per node");

  Problem p;
  p.demands = demands;
  p.pda = &pda;
  p.heads.assign(nodes.size(), 0.0);
  p.flows.assign(links.size(), 0.0);
  p.speed.assign(links.size(), 0.0);
  p.valve_m.assign(links.size(), 0.0);
  p.active.assign(links.size(), 1);
  p.tank_full.assign(nodes.size(), 0);
  p.tank_empty.assign(nodes.size(), 0);

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (const auto* r = std::get_if<Reservoir>(&n.kind)) {
      p.heads[i] = r->head;
    } else if (const auto* t = std::get_if<Tank>(&n.kind)) {
      const double level = tank_levels[i];
      if (level < t->min_level - kLevelTol || level > t->max_level + kLevelTol)
        throw std::invalid_argument("tank " + n.id + " level outside [min, max]");
      p.heads[i] = t->elevation + level;
      p.tank_full[i] = level >= t->max_level - kLevelTol;
      p.tank_empty[i] = level <= t->min_level + kLevelTol;
    } else {
      if (!(demands[i] >= 0.0)) throw std::invalid_argument("negative demand at " + n.id);
      p.heads[i] = n.elevation() + units::psi_to_head_m(pda.p_req);
    }
  }

  for (std::size_t k = 0; k < links.size(); ++k) {
    const Link& l = links[k];
    if (l.status == LinkStatus::Closed) p.active[k] = 0;
    if (l.is_pump()) {
      double speed = 0.0;
      if (net.is_tank_pump(k)) {
        auto it = action.delegated.find(l.id);
        const bool on = it == action.delegated.end() || it->second;
        speed = on ? std::get<Pump>(l.kind).init_speed : 0.0;
      } else {
        auto it = action.pump_speed.find(l.id);
        if (it == action.pump_speed.end())
          throw std::invalid_argument("action has no speed for pump " + l.id);
        speed = it->second;
      }
      p.speed[k] = speed;
      if (speed <= 0.0) p.active[k] = 0;
    } else if (l.is_valve()) {
      auto it = action.valve_setting.find(l.id);
      if (it == action.valve_setting.end())
        throw std::invalid_argument("action has no setting for valve " + l.id);
      p.valve_m[k] = units::psi_to_head_m(it->second);
    }
  }

  if (auto lost = isolated_junction(net, p.active)) throw StructuralInfeasibility(nodes[*lost].id);

  // Initial flows: 0.3 m/s in pipes and valves, half-shutoff point for pumps.
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (!p.active[k]) continue;
    if (const auto* pipe = std::get_if<Pipe>(&links[k].kind)) {
      p.flows[k] = 0.3 * M_PI * 0.25 * pipe->diameter * pipe->diameter;
    } else if (const auto* v = std::get_if<PbvValve>(&links[k].kind)) {
      p.flows[k] = 0.3 * M_PI * 0.25 * v->diameter * v->diameter;
    } else {
      const PumpModel& m = pumps_[k];
      const double w = p.speed[k];
      p.flows[k] = std::pow(0.5 * w * w * m.h0 / (m.r * std::pow(w, 2.0 - m.n)), 1.0 / m.n);
    }
  }

  int budget = options_.max_iterations;
  for (;;) {
    newton(p, budget);
    if (!p.converged) break;
    // Status checks: check valves, reverse PBV flow, full/empty tanks.
    bool changed = false;
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (!p.active[k]) continue;
      const Link& l = links[k];
      const double q = p.flows[k];
      bool close = false;
      if (l.is_pump() || l.is_valve()) close = q < 0.0;
      else if (std::get<Pipe>(l.kind).check_valve) close = q < 0.0;
      const std::size_t from = net.from_index(k), to = net.to_index(k);
      if ((p.tank_full[to] && q > 0.0) || (p.tank_full[from] && q < 0.0)) close = true;
      if ((p.tank_empty[from] && q > 0.0) || (p.tank_empty[to] && q < 0.0)) close = true;
      if (!close) continue;
      p.active[k] = 0;
      if (isolated_junction(net, p.active)) {
        p.active[k] = 1;  // closing would strand a junction; keep it open
        continue;
      }
      p.flows[k] = 0.0;
      changed = true;
    }
    if (!changed || budget == 0) break;
  }

  HydraulicState s;
  s.heads = p.heads;
  s.flows = p.flows;
  s.pressures.assign(nodes.size(), 0.0);
  s.requested.assign(nodes.size(), 0.0);
  s.delivered.assign(nodes.size(), 0.0);
  s.pump_gain.assign(links.size(), 0.0);
  s.pump_power.assign(links.size(), 0.0);
  s.setting.assign(links.size(), 0.0);
  s.open.assign(links.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.is_junction()) {
      s.pressures[i] = units::head_m_to_psi(p.heads[i] - n.elevation());
      s.requested[i] = demands[i];
      s.delivered[i] = demands[i] * pda_factor(s.pressures[i], pda);
    } else if (n.is_tank()) {
      s.pressures[i] = units::head_m_to_psi(tank_levels[i]);
    }
  }
  for (std::size_t k = 0; k < links.size(); ++k) {
    s.open[k] = p.active[k] != 0;
    const Link& l = links[k];
    if (l.is_pump()) {
      s.setting[k] = s.open[k] ? p.speed[k] : 0.0;
      if (s.open[k] && p.flows[k] > 0.0) {
        s.pump_gain[k] = pump_head(pumps_[k], p.flows[k], p.speed[k]);
        s.pump_power[k] = units::kWaterDensity * units::kGravity * p.flows[k] *
                          s.pump_gain[k] / (1000.0 * pumps_[k].efficiency);
      }
    } else if (l.is_valve()) {
      s.setting[k] = units::head_m_to_psi(p.valve_m[k]);
    }
  }
  s.converged = p.converged;
  s.iterations = p.iterations;
  s.max_residual = p.residual;
  s.relative_flow_change = p.relative_change;
  return s;
}

HydraulicState solve_snapshot(const Network& net, std::span<const double> demands,
                              const ControlAction& action,
                              std::span<const double> tank_levels, const PdaParams& pda) {
  return HydraulicSolver(net).solve(demands, action, tank_levels, pda);
}

}  // namespace wdn
