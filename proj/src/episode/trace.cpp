#include <fstream>
#include <stdexcept>

#include "wdn/episode.hpp"
#include "wdn/format.hpp"

namespace wdn {

namespace {

std::ofstream open_trace(const std::string& path, const std::string& metadata_json,
                         const char* header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!metadata_json.empty()) out << "# " << metadata_json << '\n';
  out << header << '\n';
  return out;
}

}  // namespace

void write_node_trace(const std::string& path, const Network& net,
                      const std::vector<EpisodeResult>& episodes,
                      const std::string& metadata_json) {
  auto out = open_trace(path, metadata_json, "t,node_id,pressure_psi,delivered_m3s");
  for (const auto& ep : episodes)
    for (int t = 0; t < ep.steps(); ++t) {
      const auto& s = ep.states[static_cast<std::size_t>(t)];
      for (std::size_t i : net.junction_indices())
        out << ep.first_hour + t << ',' << net.nodes()[i].id << ','
            << format_number(s.pressures[i]) << ',' << format_number(s.delivered[i]) << '\n';
    }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_pump_trace(const std::string& path, const Network& net,
                      const std::vector<EpisodeResult>& episodes,
                      const std::string& metadata_json) {
  auto out = open_trace(path, metadata_json, "t,pump_id,speed,power_kw");
  for (const auto& ep : episodes)
    for (int t = 0; t < ep.steps(); ++t) {
      const auto& s = ep.states[static_cast<std::size_t>(t)];
      for (std::size_t i : net.pumps())
        out << ep.first_hour + t << ',' << net.links()[i].id << ','
            << format_number(s.setting[i]) << ',' << format_number(s.pump_power[i]) << '\n';
    }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace wdn
