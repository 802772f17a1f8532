// Reader and writer for the INP subset. See docs/inp-format.md.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "wdn/format.hpp"
#include "wdn/network.hpp"
#include "wdn/units.hpp"

namespace wdn {

namespace {

using Kind = NetworkError::Kind;

struct UnitScale {
  double length;        // elevations, heads, lengths, levels, tank diameters
  double pipe_diameter; // pipe and valve diameters
  double flow;
};

UnitScale scale_for(FlowUnit unit) {
  if (unit == FlowUnit::GallonsPerMinute)
    return {units::kMetersPerFoot, units::kMetersPerInch, units::kCmsPerGpm};
  return {1.0, 1e-3, 1.0};
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line.substr(0, line.find(';')));
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

double number(const std::string& tok, std::size_t line, const char* what) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw NetworkError(Kind::Syntax, at_line(line),
                       std::string("expected number for ") + what + ", got '" + tok + "'");
  return v;
}

void need(const std::vector<std::string>& t, std::size_t n, std::size_t line,
          const char* section) {
  if (t.size() < n)
    throw NetworkError(Kind::Syntax, at_line(line),
                       std::string("too few fields in ") + section + " entry");
}

enum class Section {
  None, Title, Junctions, Reservoirs, Tanks, Pipes, Pumps, Valves, Curves,
  Patterns, Demands, Coordinates, Regions, Interest, Bounds, Status, Options, End, Unknown
};

Section section_of(const std::string& name) {
  static const std::map<std::string, Section> kSections = {
      {"[TITLE]", Section::Title},         {"[JUNCTIONS]", Section::Junctions},
      {"[RESERVOIRS]", Section::Reservoirs}, {"[TANKS]", Section::Tanks},
      {"[PIPES]", Section::Pipes},         {"[PUMPS]", Section::Pumps},
      {"[VALVES]", Section::Valves},       {"[CURVES]", Section::Curves},
      {"[PATTERNS]", Section::Patterns},   {"[DEMANDS]", Section::Demands},
      {"[COORDINATES]", Section::Coordinates}, {"[REGIONS]", Section::Regions},
      {"[INTEREST]", Section::Interest},   {"[BOUNDS]", Section::Bounds},
      {"[STATUS]", Section::Status},       {"[OPTIONS]", Section::Options},
      {"[END]", Section::End}};
  auto it = kSections.find(upper(name));
  return it == kSections.end() ? Section::Unknown : it->second;
}

struct Builder {
  UnitScale scale;
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<Curve> curves;
  std::map<std::string, int> regions;
  std::vector<std::string> interest;
  bool saw_regions = false;
  bool saw_interest = false;
  std::vector<std::string> warnings;

  std::map<std::string, std::size_t> node_line;
  std::map<std::string, std::size_t> link_line;
  std::map<std::string, std::size_t> curve_pos;
  std::map<std::string, std::size_t> demand_sum_index;  // junctions touched by [DEMANDS]

  void add_node(Node n, std::size_t line) {
    if (!node_line.emplace(n.id, line).second)
      throw NetworkError(Kind::DuplicateId, at_line(line), "duplicate node id " + n.id);
    nodes.push_back(std::move(n));
  }

  void add_link(Link l, std::size_t line) {
    if (!link_line.emplace(l.id, line).second)
      throw NetworkError(Kind::DuplicateId, at_line(line), "duplicate link id " + l.id);
    links.push_back(std::move(l));
  }

  Link* find_link(const std::string& id) {
    for (auto& l : links)
      if (l.id == id) return &l;
    return nullptr;
  }

  Node* find_node(const std::string& id) {
    for (auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
};

void parse_junction(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 2, line, "[JUNCTIONS]");
  Junction j;
  j.elevation = number(t[1], line, "elevation") * b.scale.length;
  if (t.size() > 2) j.base_demand = number(t[2], line, "demand") * b.scale.flow;
  if (t.size() > 3) b.warnings.push_back(at_line(line) + ": junction pattern ignored");
  b.add_node({t[0], j}, line);
}

void parse_reservoir(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 2, line, "[RESERVOIRS]");
  Reservoir r{number(t[1], line, "head") * b.scale.length};
  if (t.size() > 2) b.warnings.push_back(at_line(line) + ": reservoir pattern ignored");
  b.add_node({t[0], r}, line);
}

void parse_tank(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 6, line, "[TANKS]");
  Tank k;
  k.elevation = number(t[1], line, "elevation") * b.scale.length;
  k.init_level = number(t[2], line, "initial level") * b.scale.length;
  k.min_level = number(t[3], line, "minimum level") * b.scale.length;
  k.max_level = number(t[4], line, "maximum level") * b.scale.length;
  k.diameter = number(t[5], line, "diameter") * b.scale.length;
  if (t.size() > 7 && t[7] != "*")
    b.warnings.push_back(at_line(line) + ": tank volume curve ignored (cylindrical tank)");
  b.add_node({t[0], k}, line);
}

LinkStatus parse_status(const std::string& tok, std::size_t line, bool* check_valve) {
  const std::string s = upper(tok);
  if (s == "OPEN") return LinkStatus::Open;
  if (s == "CLOSED") return LinkStatus::Closed;
  if (s == "CV" && check_valve) {
    *check_valve = true;
    return LinkStatus::Open;
  }
  throw NetworkError(Kind::Syntax, at_line(line), "unknown link status '" + tok + "'");
}

void parse_pipe(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 6, line, "[PIPES]");
  Pipe p;
  p.length = number(t[3], line, "length") * b.scale.length;
  p.diameter = number(t[4], line, "diameter") * b.scale.pipe_diameter;
  p.roughness = number(t[5], line, "roughness");
  if (t.size() > 6) p.minor_loss = number(t[6], line, "minor loss");
  Link l{t[0], t[1], t[2], p};
  if (t.size() > 7) {
    bool cv = false;
    l.status = parse_status(t[7], line, &cv);
    std::get<Pipe>(l.kind).check_valve = cv;
  }
  b.add_link(std::move(l), line);
}

void parse_pump(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 3, line, "[PUMPS]");
  Pump p;
  bool has_curve = false;
  for (std::size_t i = 3; i < t.size(); i += 2) {
    const std::string key = upper(t[i]);
    if (i + 1 >= t.size())
      throw NetworkError(Kind::Syntax, at_line(line), "pump keyword " + key + " without value");
    const std::string& val = t[i + 1];
    if (key == "HEAD") {
      p.curve_id = val;
      has_curve = true;
    } else if (key == "SPEED") {
      p.init_speed = number(val, line, "speed");
    } else if (key == "PATTERN") {
      b.warnings.push_back(at_line(line) + ": pump speed pattern ignored");
    } else if (key == "POWER") {
      throw NetworkError(Kind::Unsupported, at_line(line),
                         "constant-power pumps are not supported");
    } else {
      throw NetworkError(Kind::Syntax, at_line(line), "unknown pump keyword " + key);
    }
  }
  if (!has_curve)
    throw NetworkError(Kind::Syntax, at_line(line), "pump " + t[0] + " has no HEAD curve");
  b.add_link({t[0], t[1], t[2], p}, line);
}

void parse_valve(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 6, line, "[VALVES]");
  if (upper(t[4]) != "PBV")
    throw NetworkError(Kind::Unsupported, at_line(line),
                       "valve type " + t[4] + " not supported (only PBV)");
  PbvValve v;
  v.diameter = number(t[3], line, "diameter") * b.scale.pipe_diameter;
  v.init_setting = number(t[5], line, "setting");
  if (t.size() > 6) v.minor_loss = number(t[6], line, "minor loss");
  b.add_link({t[0], t[1], t[2], v}, line);
}

void parse_curve(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 3, line, "[CURVES]");
  const double x = number(t[1], line, "curve x");
  const double y = number(t[2], line, "curve y");
  auto it = b.curve_pos.find(t[0]);
  if (it == b.curve_pos.end()) {
    it = b.curve_pos.emplace(t[0], b.curves.size()).first;
    b.curves.push_back({t[0], {}});
  }
  b.curves[it->second].points.emplace_back(x, y);
}

void parse_demand(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 2, line, "[DEMANDS]");
  Node* n = b.find_node(t[0]);
  if (!n || !n->is_junction())
    throw NetworkError(Kind::DanglingReference, at_line(line), "unknown junction " + t[0]);
  auto& j = std::get<Junction>(n->kind);
  const double d = number(t[1], line, "demand") * b.scale.flow;
  // [DEMANDS] replaces the [JUNCTIONS] value; multiple categories add up.
  if (b.demand_sum_index.emplace(t[0], 1).second) j.base_demand = d;
  else j.base_demand += d;
}

void parse_region(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 2, line, "[REGIONS]");
  b.saw_regions = true;
  const double r = number(t[1], line, "region");
  if (r != static_cast<int>(r) || r < 1)
    throw NetworkError(Kind::Syntax, at_line(line), "region id must be a positive integer");
  if (!b.regions.emplace(t[0], static_cast<int>(r)).second)
    throw NetworkError(Kind::DuplicateId, at_line(line), "region assigned twice for " + t[0]);
}

void parse_bounds(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 3, line, "[BOUNDS]");
  Link* l = b.find_link(t[0]);
  if (!l) throw NetworkError(Kind::DanglingReference, at_line(line), "unknown link " + t[0]);
  const double lo = number(t[1], line, "lower bound");
  const double hi = number(t[2], line, "upper bound");
  if (auto* p = std::get_if<Pump>(&l->kind)) {
    p->speed_min = lo;
    p->speed_max = hi;
  } else if (auto* v = std::get_if<PbvValve>(&l->kind)) {
    v->setting_min = lo;
    v->setting_max = hi;
  } else {
    throw NetworkError(Kind::Syntax, at_line(line), "bounds apply to pumps and valves only");
  }
}

void parse_status_line(Builder& b, const std::vector<std::string>& t, std::size_t line) {
  need(t, 2, line, "[STATUS]");
  Link* l = b.find_link(t[0]);
  if (!l) throw NetworkError(Kind::DanglingReference, at_line(line), "unknown link " + t[0]);
  l->status = parse_status(t[1], line, nullptr);
}

}  // namespace

ParsedNetwork parse_inp(const std::string& text, FlowUnit flow_unit) {
  Builder b;
  b.scale = scale_for(flow_unit);
  Section section = Section::None;
  std::set<std::string> warned_sections;
  // Deferred until all links exist.
  std::vector<std::pair<std::vector<std::string>, std::size_t>> bounds, status;

  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto t = tokenize(raw);
    if (t.empty()) continue;
    if (t[0].front() == '[') {
      if (t.size() != 1 || t[0].back() != ']')
        throw NetworkError(Kind::Syntax, at_line(line), "malformed section header");
      section = section_of(t[0]);
      if (section == Section::Unknown && warned_sections.insert(upper(t[0])).second)
        b.warnings.push_back(at_line(line) + ": unknown section " + t[0] + " skipped");
      if (section == Section::Patterns)
        b.warnings.push_back(at_line(line) + ": [PATTERNS] ignored; demand comes from the demand series");
      if (section == Section::Options)
        b.warnings.push_back(at_line(line) + ": [OPTIONS] ignored; units come from the caller");
      if (section == Section::End) break;
      continue;
    }
    switch (section) {
      case Section::None:
        throw NetworkError(Kind::Syntax, at_line(line), "data before any section header");
      case Section::Junctions: parse_junction(b, t, line); break;
      case Section::Reservoirs: parse_reservoir(b, t, line); break;
      case Section::Tanks: parse_tank(b, t, line); break;
      case Section::Pipes: parse_pipe(b, t, line); break;
      case Section::Pumps: parse_pump(b, t, line); break;
      case Section::Valves: parse_valve(b, t, line); break;
      case Section::Curves: parse_curve(b, t, line); break;
      case Section::Demands: parse_demand(b, t, line); break;
      case Section::Regions: parse_region(b, t, line); break;
      case Section::Interest:
        b.saw_interest = true;
        b.interest.insert(b.interest.end(), t.begin(), t.end());
        break;
      case Section::Bounds: bounds.emplace_back(t, line); break;
      case Section::Status: status.emplace_back(t, line); break;
      default: break;  // title, patterns, coordinates, options, unknown
    }
  }
  for (const auto& [t, l] : bounds) parse_bounds(b, t, l);
  for (const auto& [t, l] : status) parse_status_line(b, t, l);

  // References, with the line of the referencing entity.
  for (const Link& l : b.links) {
    const std::size_t ln = b.link_line.at(l.id);
    for (const std::string* end : {&l.from, &l.to})
      if (!b.node_line.contains(*end))
        throw NetworkError(Kind::DanglingReference, at_line(ln),
                           "link " + l.id + " references missing node " + *end);
    if (const auto* p = std::get_if<Pump>(&l.kind); p && !b.curve_pos.contains(p->curve_id))
      throw NetworkError(Kind::DanglingReference, at_line(ln),
                         "pump " + l.id + " references missing curve " + p->curve_id);
  }

  std::vector<std::string> junctions;
  for (const Node& n : b.nodes)
    if (n.is_junction()) junctions.push_back(n.id);
  if (!b.saw_regions) {
    for (const auto& id : junctions) b.regions[id] = 1;
    b.warnings.push_back("no [REGIONS] section; all junctions assigned to region 1");
  }
  if (!b.saw_interest) {
    b.interest = junctions;
    b.warnings.push_back("no [INTEREST] section; all junctions are interest nodes");
  }

  Network net = Network::create(std::move(b.nodes), std::move(b.links), std::move(b.curves),
                                flow_unit, std::move(b.regions), std::move(b.interest));
  return {std::move(net), std::move(b.warnings)};
}

ParsedNetwork load_inp_file(const std::string& path, FlowUnit flow_unit) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_inp(ss.str(), flow_unit);
}

namespace {

std::string num(double v) { return format_number(v); }

}  // namespace

std::string write_inp(const Network& net) {
  const UnitScale s = scale_for(net.flow_unit());
  std::ostringstream out;
  out << "[TITLE]\nwritten by wdnops\n\n";

  out << "[JUNCTIONS]\n;ID Elevation Demand\n";
  for (const Node& n : net.nodes())
    if (const auto* j = std::get_if<Junction>(&n.kind))
      out << n.id << ' ' << num(j->elevation / s.length) << ' '
          << num(j->base_demand / s.flow) << '\n';

  out << "\n[RESERVOIRS]\n;ID Head\n";
  for (const Node& n : net.nodes())
    if (const auto* r = std::get_if<Reservoir>(&n.kind))
      out << n.id << ' ' << num(r->head / s.length) << '\n';

  out << "\n[TANKS]\n;ID Elevation InitLevel MinLevel MaxLevel Diameter\n";
  for (const Node& n : net.nodes())
    if (const auto* k = std::get_if<Tank>(&n.kind))
      out << n.id << ' ' << num(k->elevation / s.length) << ' ' << num(k->init_level / s.length)
          << ' ' << num(k->min_level / s.length) << ' ' << num(k->max_level / s.length) << ' '
          << num(k->diameter / s.length) << '\n';

  out << "\n[PIPES]\n;ID Node1 Node2 Length Diameter Roughness MinorLoss Status\n";
  for (const Link& l : net.links())
    if (const auto* p = std::get_if<Pipe>(&l.kind)) {
      const char* status = p->check_valve ? "CV"
                           : l.status == LinkStatus::Closed ? "Closed"
                                                            : "Open";
      out << l.id << ' ' << l.from << ' ' << l.to << ' ' << num(p->length / s.length) << ' '
          << num(p->diameter / s.pipe_diameter) << ' ' << num(p->roughness) << ' '
          << num(p->minor_loss) << ' ' << status << '\n';
    }

  out << "\n[PUMPS]\n;ID Node1 Node2 Parameters\n";
  for (const Link& l : net.links())
    if (const auto* p = std::get_if<Pump>(&l.kind))
      out << l.id << ' ' << l.from << ' ' << l.to << " HEAD " << p->curve_id << " SPEED "
          << num(p->init_speed) << '\n';

  out << "\n[VALVES]\n;ID Node1 Node2 Diameter Type Setting MinorLoss\n";
  for (const Link& l : net.links())
    if (const auto* v = std::get_if<PbvValve>(&l.kind))
      out << l.id << ' ' << l.from << ' ' << l.to << ' ' << num(v->diameter / s.pipe_diameter)
          << " PBV " << num(v->init_setting) << ' ' << num(v->minor_loss) << '\n';

  out << "\n[STATUS]\n";
  // Pumps before valves, as in the link sections.
  const auto pumps_then_valves = [&](auto&& emit) {
    for (const Link& l : net.links())
      if (std::holds_alternative<Pump>(l.kind)) emit(l);
    for (const Link& l : net.links())
      if (std::holds_alternative<PbvValve>(l.kind)) emit(l);
  };
  pumps_then_valves([&](const Link& l) {
    if (l.status == LinkStatus::Closed) out << l.id << " Closed\n";
  });

  out << "\n[BOUNDS]\n;ID Min Max\n";
  pumps_then_valves([&](const Link& l) {
    if (const auto* p = std::get_if<Pump>(&l.kind))
      out << l.id << ' ' << num(p->speed_min) << ' ' << num(p->speed_max) << '\n';
    else if (const auto* v = std::get_if<PbvValve>(&l.kind))
      out << l.id << ' ' << num(v->setting_min) << ' ' << num(v->setting_max) << '\n';
  });

  out << "\n[CURVES]\n;ID Flow Head\n";
  for (const Curve& c : net.curves())
    for (const auto& [x, y] : c.points) out << c.id << ' ' << num(x) << ' ' << num(y) << '\n';

  out << "\n[REGIONS]\n;Junction Region\n";
  for (const Node& n : net.nodes())
    if (n.is_junction()) out << n.id << ' ' << net.region_of(n.id) << '\n';

  out << "\n[INTEREST]\n";
  for (const auto& id : net.interest_nodes()) out << id << '\n';

  out << "\n[END]\n";
  return out.str();
}

}  // namespace wdn
