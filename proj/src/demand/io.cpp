#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wdn/demand.hpp"
#include "wdn/format.hpp"

namespace wdn {

using nlohmann::json;

void write_demand_csv(const std::string& path, const DemandDataset& dataset,
                      const std::string& metadata_json) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!metadata_json.empty()) out << "# " << metadata_json << '\n';
  out << "node_id,hour,demand_m3s\n";
  const int hours = dataset.hours();
  for (std::size_t j = 0; j < dataset.junctions.size(); ++j)
    for (int t = 0; t < hours; ++t)
      out << dataset.junctions[j] << ',' << t << ',' << format_number(dataset.value(j, t)) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::pair<std::vector<double>, int> read_demand_csv(const std::string& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::size_t> col;
  const auto& ids = net.junction_ids();
  for (std::size_t j = 0; j < ids.size(); ++j) col[ids[j]] = j;

  std::vector<std::map<long long, double>> rows(ids.size());
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  long long max_hour = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (!header) {
      if (line != "node_id,hour,demand_m3s")
        throw std::runtime_error(where + ": expected header node_id,hour,demand_m3s");
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw std::runtime_error(where + ": expected three columns");
    const std::string id = line.substr(0, c1);
    const auto hour = parse_integer(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
    const auto value = parse_double(std::string_view(line).substr(c2 + 1));
    if (!hour || *hour < 0 || !value || !(*value >= 0.0))
      throw std::runtime_error(where + ": bad hour or demand value");
    auto it = col.find(id);
    if (it == col.end()) throw std::runtime_error(where + ": unknown junction '" + id + "'");
    if (!rows[it->second].emplace(*hour, *value).second)
      throw std::runtime_error(where + ": duplicate row for " + id);
    max_hour = std::max(max_hour, *hour);
  }
  if (!header) throw std::runtime_error(path + ": missing header");
  if ((max_hour + 1) % kHoursPerDay != 0)
    throw std::runtime_error(path + ": hours do not cover whole days");
  const int days = static_cast<int>((max_hour + 1) / kHoursPerDay);
  const auto hours = static_cast<std::size_t>(max_hour + 1);
  std::vector<double> values(ids.size() * hours);
  for (std::size_t j = 0; j < ids.size(); ++j) {
    if (rows[j].size() != hours)
      throw std::runtime_error(path + ": junction " + ids[j] + " is missing hours");
    std::size_t t = 0;
    for (const auto& [h, v] : rows[j]) values[j * hours + t++] = v;
  }
  return {std::move(values), days};
}

std::string event_to_json(const EventRecord& e) {
  json j = {{"region", e.region},
            {"building_type", archetype_name(e.building_type)},
            {"day", e.day},
            {"hour", e.hour},
            {"text", e.text},
            {"level", e.level}};
  return j.dump();
}

EventRecord event_from_json(const std::string& line) {
  const json j = json::parse(line);
  EventRecord e;
  e.region = j.at("region").get<int>();
  const auto a = archetype_from_name(j.at("building_type").get<std::string>());
  if (!a) throw std::invalid_argument("unknown building_type in event record");
  e.building_type = *a;
  e.day = j.at("day").get<int>();
  e.hour = j.at("hour").get<int>();
  e.text = j.at("text").get<std::string>();
  e.level = j.at("level").get<int>();
  if (e.level < 0 || e.level >= kNumLevels) throw std::invalid_argument("event level outside 0..4");
  if (e.hour < 0 || e.hour >= kHoursPerDay) throw std::invalid_argument("event hour outside 0..23");
  if (e.text.empty()) throw std::invalid_argument("event text is empty");
  return e;
}

void write_events_jsonl(const std::string& path, std::span<const EventRecord> events) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& e : events) out << event_to_json(e) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<EventRecord> read_events_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<EventRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(event_from_json(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace wdn
