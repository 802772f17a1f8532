#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "wdn/network.hpp"

namespace wdn {

double Tank::area() const { return std::numbers::pi * 0.25 * diameter * diameter; }

double Node::elevation() const {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Reservoir>) return k.head;
        else return k.elevation;
      },
      kind);
}

NetworkError::NetworkError(Kind kind, std::string where, const std::string& what)
    : std::runtime_error(where.empty() ? what : where + ": " + what),
      kind_(kind),
      where_(std::move(where)) {}

namespace {

using Kind = NetworkError::Kind;

[[noreturn]] void fail(Kind kind, const std::string& where, const std::string& what) {
  throw NetworkError(kind, where, what);
}

void check_node(const Node& n) {
  if (n.id.empty()) fail(Kind::Invalid, "node", "empty id");
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Junction>) {
          if (!std::isfinite(k.elevation))
            fail(Kind::Invalid, "node " + n.id, "elevation not finite");
          if (!(k.base_demand >= 0.0))
            fail(Kind::Invalid, "node " + n.id, "negative base demand");
        } else if constexpr (std::is_same_v<T, Reservoir>) {
          if (!std::isfinite(k.head)) fail(Kind::Invalid, "node " + n.id, "head not finite");
        } else {
          if (!(0.0 <= k.min_level && k.min_level <= k.init_level &&
                k.init_level <= k.max_level))
            fail(Kind::Invalid, "node " + n.id,
                 "tank levels must satisfy 0 <= min <= init <= max");
          if (!(k.diameter > 0.0)) fail(Kind::Invalid, "node " + n.id, "tank diameter <= 0");
        }
      },
      n.kind);
}

void check_link(const Link& l) {
  const std::string where = "link " + l.id;
  if (l.id.empty()) fail(Kind::Invalid, "link", "empty id");
  if (l.from == l.to) fail(Kind::Invalid, where, "link connects a node to itself");
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Pipe>) {
          if (!(k.length > 0.0 && k.diameter > 0.0 && k.roughness > 0.0))
            fail(Kind::Invalid, where, "pipe length, diameter and roughness must be > 0");
          if (!(k.minor_loss >= 0.0)) fail(Kind::Invalid, where, "negative minor loss");
        } else if constexpr (std::is_same_v<T, Pump>) {
          if (!(k.speed_min < k.speed_max))
            fail(Kind::Invalid, where, "pump speed_min must be < speed_max");
          if (!(k.speed_min >= 0.0)) fail(Kind::Invalid, where, "negative pump speed bound");
          if (!(k.init_speed >= k.speed_min && k.init_speed <= k.speed_max))
            fail(Kind::Invalid, where, "pump init speed outside bounds");
        } else {
          if (!(k.setting_min < k.setting_max))
            fail(Kind::Invalid, where, "valve setting_min must be < setting_max");
          if (!(k.init_setting >= k.setting_min && k.init_setting <= k.setting_max))
            fail(Kind::Invalid, where, "valve init setting outside bounds");
          if (!(k.diameter > 0.0)) fail(Kind::Invalid, where, "valve diameter <= 0");
        }
      },
      l.kind);
}

void check_curve(const Curve& c) {
  const std::string where = "curve " + c.id;
  if (c.points.empty()) fail(Kind::Invalid, where, "curve has no points");
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (!(c.points[i].second >= 0.0)) fail(Kind::Invalid, where, "negative head");
    if (i > 0 && !(c.points[i].first > c.points[i - 1].first))
      fail(Kind::Invalid, where, "flows must be strictly increasing");
  }
}

}  // namespace

Network Network::create(std::vector<Node> nodes, std::vector<Link> links,
                        std::vector<Curve> curves, FlowUnit flow_unit,
                        std::map<std::string, int> regions,
                        std::vector<std::string> interest_nodes) {
  Network net;
  net.flow_unit_ = flow_unit;

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check_node(nodes[i]);
    if (!net.node_lookup_.emplace(nodes[i].id, i).second)
      fail(Kind::DuplicateId, "node " + nodes[i].id, "duplicate node id");
    if (nodes[i].is_junction()) net.junctions_.push_back(i);
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    check_curve(curves[i]);
    if (!net.curve_lookup_.emplace(curves[i].id, i).second)
      fail(Kind::DuplicateId, "curve " + curves[i].id, "duplicate curve id");
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    check_link(l);
    if (!net.link_lookup_.emplace(l.id, i).second)
      fail(Kind::DuplicateId, "link " + l.id, "duplicate link id");
    auto from = net.node_lookup_.find(l.from);
    if (from == net.node_lookup_.end())
      fail(Kind::DanglingReference, "link " + l.id, "unknown node " + l.from);
    auto to = net.node_lookup_.find(l.to);
    if (to == net.node_lookup_.end())
      fail(Kind::DanglingReference, "link " + l.id, "unknown node " + l.to);
    net.link_from_.push_back(from->second);
    net.link_to_.push_back(to->second);
    if (const auto* p = std::get_if<Pump>(&l.kind)) {
      if (!net.curve_lookup_.contains(p->curve_id))
        fail(Kind::DanglingReference, "link " + l.id, "unknown curve " + p->curve_id);
    }
  }

  // Regions: cover every junction, only junctions, contiguous from 1.
  std::set<int> region_ids;
  for (const auto& [id, region] : regions) {
    auto it = net.node_lookup_.find(id);
    if (it == net.node_lookup_.end())
      fail(Kind::DanglingReference, "region of " + id, "unknown node " + id);
    if (!nodes[it->second].is_junction())
      fail(Kind::Invalid, "region of " + id, "regions apply to junctions only");
    region_ids.insert(region);
  }
  for (std::size_t j : net.junctions_)
    if (!regions.contains(nodes[j].id))
      fail(Kind::Invalid, "node " + nodes[j].id, "junction has no region");
  int expected = 1;
  for (int r : region_ids) {
    if (r != expected)
      fail(Kind::Invalid, "regions", "region ids must be contiguous starting at 1");
    ++expected;
  }
  net.region_count_ = static_cast<int>(region_ids.size());

  std::set<std::string> seen;
  for (const auto& id : interest_nodes) {
    auto it = net.node_lookup_.find(id);
    if (it == net.node_lookup_.end())
      fail(Kind::DanglingReference, "interest node " + id, "unknown node " + id);
    if (!nodes[it->second].is_junction())
      fail(Kind::Invalid, "interest node " + id, "interest nodes must be junctions");
    if (!seen.insert(id).second)
      fail(Kind::DuplicateId, "interest node " + id, "listed twice");
  }

  net.nodes_ = std::move(nodes);
  net.links_ = std::move(links);
  net.curves_ = std::move(curves);
  net.regions_ = std::move(regions);
  net.interest_nodes_ = std::move(interest_nodes);

  auto by_id = [&net](std::size_t a, std::size_t b) {
    return net.links_[a].id < net.links_[b].id;
  };
  for (std::size_t i = 0; i < net.links_.size(); ++i) {
    if (net.links_[i].is_pump()) {
      net.pumps_.push_back(i);
      (net.is_tank_pump(i) ? net.tank_pumps_ : net.controlled_pumps_).push_back(i);
    } else if (net.links_[i].is_valve()) {
      net.valves_.push_back(i);
    }
  }
  std::sort(net.pumps_.begin(), net.pumps_.end(), by_id);
  std::sort(net.controlled_pumps_.begin(), net.controlled_pumps_.end(), by_id);
  std::sort(net.tank_pumps_.begin(), net.tank_pumps_.end(), by_id);
  std::sort(net.valves_.begin(), net.valves_.end(), by_id);
  return net;
}

std::optional<std::size_t> Network::node_index(const std::string& id) const {
  auto it = node_lookup_.find(id);
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Network::link_index(const std::string& id) const {
  auto it = link_lookup_.find(id);
  if (it == link_lookup_.end()) return std::nullopt;
  return it->second;
}

const Node& Network::node(const std::string& id) const {
  auto idx = node_index(id);
  if (!idx) throw std::out_of_range("unknown node " + id);
  return nodes_[*idx];
}

const Link& Network::link(const std::string& id) const {
  auto idx = link_index(id);
  if (!idx) throw std::out_of_range("unknown link " + id);
  return links_[*idx];
}

const Curve& Network::curve(const std::string& id) const {
  auto it = curve_lookup_.find(id);
  if (it == curve_lookup_.end()) throw std::out_of_range("unknown curve " + id);
  return curves_[it->second];
}

std::vector<std::string> Network::junction_ids() const {
  std::vector<std::string> ids;
  ids.reserve(junctions_.size());
  for (std::size_t j : junctions_) ids.push_back(nodes_[j].id);
  return ids;
}

int Network::region_of(const std::string& junction_id) const {
  auto it = regions_.find(junction_id);
  if (it == regions_.end()) throw std::out_of_range("no region for " + junction_id);
  return it->second;
}

bool Network::is_tank_pump(std::size_t link) const {
  if (!links_[link].is_pump()) return false;
  return nodes_[link_from_[link]].is_tank() || nodes_[link_to_[link]].is_tank();
}

}  // namespace wdn
