#pragma once
// Water distribution network model. All stored quantities are SI
// (meters, cubic meters per second) except pump curve points, which keep
// the units of the source file, and PBV settings, which are in psi.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wdn {

enum class FlowUnit { CubicMetersPerSecond, GallonsPerMinute };

struct Junction {
  double elevation = 0.0;    // m
  double base_demand = 0.0;  // m^3/s
};

struct Reservoir {
  double head = 0.0;  // m
};

// Cylindrical storage tank.
struct Tank {
  double elevation = 0.0;
  double min_level = 0.0;
  double max_level = 0.0;
  double init_level = 0.0;
  double diameter = 0.0;

  double area() const;
};

struct Node {
  std::string id;
  std::variant<Junction, Reservoir, Tank> kind;

  bool is_junction() const { return std::holds_alternative<Junction>(kind); }
  bool is_reservoir() const { return std::holds_alternative<Reservoir>(kind); }
  bool is_tank() const { return std::holds_alternative<Tank>(kind); }
  bool is_fixed_head() const { return !is_junction(); }
  // Elevation of a junction or tank; a reservoir's head.
  double elevation() const;
};

struct Pipe {
  double length = 0.0;      // m
  double diameter = 0.0;    // m
  double roughness = 0.0;   // Hazen-Williams C
  double minor_loss = 0.0;  // dimensionless K
  bool check_valve = false;
};

struct Pump {
  std::string curve_id;
  double init_speed = 1.0;
  double speed_min = 0.3;
  double speed_max = 3.0;
};

// Pressure breaker valve: fixed head drop (psi) when flowing from -> to.
struct PbvValve {
  double diameter = 0.0;  // m
  double init_setting = 20.0;
  double setting_min = 8.0;
  double setting_max = 50.0;
  double minor_loss = 0.0;
};

enum class LinkStatus { Open, Closed };

struct Link {
  std::string id;
  std::string from;
  std::string to;
  std::variant<Pipe, Pump, PbvValve> kind;
  LinkStatus status = LinkStatus::Open;
  // Optional flow limits (m^3/s); only used by the training penalty.
  std::optional<double> flow_min{};
  std::optional<double> flow_max{};

  bool is_pipe() const { return std::holds_alternative<Pipe>(kind); }
  bool is_pump() const { return std::holds_alternative<Pump>(kind); }
  bool is_valve() const { return std::holds_alternative<PbvValve>(kind); }
};

struct Curve {
  std::string id;
  std::vector<std::pair<double, double>> points;  // (flow, head), file units
};

// Thrown when network construction violates an invariant. `where` names the
// offending entity (or "line N" when raised by the parser).
class NetworkError : public std::runtime_error {
 public:
  enum class Kind { Syntax, DanglingReference, DuplicateId, Unsupported, Invalid };

  NetworkError(Kind kind, std::string where, const std::string& what);

  Kind kind() const { return kind_; }
  const std::string& where() const { return where_; }

 private:
  Kind kind_;
  std::string where_;
};

class Network {
 public:
  // Validates every invariant and builds the lookup indices.
  static Network create(std::vector<Node> nodes, std::vector<Link> links,
                        std::vector<Curve> curves, FlowUnit flow_unit,
                        std::map<std::string, int> regions,
                        std::vector<std::string> interest_nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<Curve>& curves() const { return curves_; }
  FlowUnit flow_unit() const { return flow_unit_; }
  const std::map<std::string, int>& regions() const { return regions_; }
  const std::vector<std::string>& interest_nodes() const { return interest_nodes_; }

  std::optional<std::size_t> node_index(const std::string& id) const;
  std::optional<std::size_t> link_index(const std::string& id) const;
  const Node& node(const std::string& id) const;
  const Link& link(const std::string& id) const;
  const Curve& curve(const std::string& id) const;

  std::size_t from_index(std::size_t link) const { return link_from_[link]; }
  std::size_t to_index(std::size_t link) const { return link_to_[link]; }

  // Junction ids and indices in declaration order.
  const std::vector<std::size_t>& junction_indices() const { return junctions_; }
  std::vector<std::string> junction_ids() const;
  int region_count() const { return region_count_; }
  int region_of(const std::string& junction_id) const;

  // Pumps that draw from or feed a tank; rule-managed.
  bool is_tank_pump(std::size_t link) const;
  // Controllable components in action order: non-tank pumps sorted by id,
  // then PBV valves sorted by id.
  const std::vector<std::size_t>& controlled_pumps() const { return controlled_pumps_; }
  const std::vector<std::size_t>& tank_pumps() const { return tank_pumps_; }
  const std::vector<std::size_t>& valves() const { return valves_; }
  // All pumps sorted by id.
  const std::vector<std::size_t>& pumps() const { return pumps_; }

 private:
  Network() = default;

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<Curve> curves_;
  FlowUnit flow_unit_ = FlowUnit::CubicMetersPerSecond;
  std::map<std::string, int> regions_;
  std::vector<std::string> interest_nodes_;

  std::map<std::string, std::size_t> node_lookup_;
  std::map<std::string, std::size_t> link_lookup_;
  std::map<std::string, std::size_t> curve_lookup_;
  std::vector<std::size_t> link_from_;
  std::vector<std::size_t> link_to_;
  std::vector<std::size_t> junctions_;
  std::vector<std::size_t> pumps_;
  std::vector<std::size_t> controlled_pumps_;
  std::vector<std::size_t> tank_pumps_;
  std::vector<std::size_t> valves_;
  int region_count_ = 0;
};

// Result of parsing an INP-subset file.
struct ParsedNetwork {
  Network network;
  std::vector<std::string> warnings;
};

ParsedNetwork parse_inp(const std::string& text, FlowUnit flow_unit);
ParsedNetwork load_inp_file(const std::string& path, FlowUnit flow_unit);

// Canonical writer for the same subset; parse_inp(write_inp(n)) reproduces n.
std::string write_inp(const Network& net);

// Built-in desk-scale benchmark: 1 reservoir, 1 tank, 8 junctions in two
// regions, 2 variable-speed pumps, 1 PBV on the inter-region trunk, 10 pipes.
Network build_mininet();

}  // namespace wdn
