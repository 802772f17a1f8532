#pragma once
// Metrics recomputed from the trace CSV text alone, independent of the
// in-memory episode results.

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdn/format.hpp"

namespace wdn::test {

struct TraceRecount {
  double dev = 0;
  long long over = 0, under = 0, n = 0;
  std::map<long long, double> energy;  // hour -> kWh
  std::map<std::string, std::pair<double, long long>> node;  // id -> (dev, count)
};

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

inline TraceRecount recount_traces(const std::string& node_csv, const std::string& pump_csv,
                                   const std::set<std::string>& interest) {
  auto fail = [](const std::string& what) { throw std::runtime_error("trace recount: " + what); };
  TraceRecount r;
  std::istringstream nodes(node_csv);
  std::string line;
  while (std::getline(nodes, line) && line.starts_with("#")) {}
  if (line != "t,node_id,pressure_psi,delivered_m3s") fail("node header");
  while (std::getline(nodes, line)) {
    const auto f = split_csv(line);
    if (f.size() != 4) fail("node row " + line);
    if (!interest.contains(f[1])) continue;
    const auto h = parse_double(f[2]);
    if (!h) fail("pressure " + f[2]);
    const double d = (*h - 60.0) / 60.0;
    r.dev += d * d;
    r.over += *h > 100.0;
    r.under += *h < 20.0;
    ++r.n;
    auto& [dev, n] = r.node[f[1]];
    dev += d * d;
    ++n;
  }
  std::istringstream pumps(pump_csv);
  while (std::getline(pumps, line) && line.starts_with("#")) {}
  if (line != "t,pump_id,speed,power_kw") fail("pump header");
  while (std::getline(pumps, line)) {
    const auto f = split_csv(line);
    if (f.size() != 4) fail("pump row " + line);
    const auto t = parse_integer(f[0]);
    const auto p = parse_double(f[3]);
    if (!t || !p) fail("pump row " + line);
    r.energy[*t] += *p;
  }
  return r;
}

}  // namespace wdn::test
