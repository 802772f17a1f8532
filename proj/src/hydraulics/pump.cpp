#include <cmath>
#include <stdexcept>

#include "wdn/hydraulics.hpp"
#include "wdn/units.hpp"

namespace wdn {

PumpModel fit_pump_curve(std::span<const std::pair<double, double>> points) {
  if (points.size() != 3) throw std::invalid_argument("pump curve fit needs exactly 3 points");
  const auto [q1, h1] = points[0];
  const auto [q2, h2] = points[1];
  const auto [q3, h3] = points[2];
  if (!(q1 == 0.0 && q1 < q2 && q2 < q3))
    throw std::invalid_argument("pump curve flows must satisfy 0 = Q1 < Q2 < Q3");
  if (!(h1 > h2 && h2 > h3 && h3 >= 0.0))
    throw std::invalid_argument("pump curve heads must satisfy H1 > H2 > H3 >= 0");
  PumpModel m;
  m.h0 = h1;
  m.n = std::log((h1 - h3) / (h1 - h2)) / std::log(q3 / q2);
  if (!(m.n > 0.0) || !std::isfinite(m.n))
    throw std::invalid_argument("pump curve fit gives non-positive exponent");
  m.r = (h1 - h2) / std::pow(q2, m.n);
  return m;
}

double pump_head(const PumpModel& model, double q, double speed) {
  const double gain =
      speed * speed * model.h0 - model.r * std::pow(speed, 2.0 - model.n) * std::pow(q, model.n);
  return gain > 0.0 ? gain : 0.0;
}

PumpModel pump_model_for(const Network& net, const Pump& pump) {
  const Curve& c = net.curve(pump.curve_id);
  const bool gpm = net.flow_unit() == FlowUnit::GallonsPerMinute;
  const double qs = gpm ? units::kCmsPerGpm : 1.0;
  const double hs = gpm ? units::kMetersPerFoot : 1.0;
  std::vector<std::pair<double, double>> si;
  for (const auto& [q, h] : c.points) si.emplace_back(q * qs, h * hs);

  if (si.size() == 1) {
    // Single design point (Q, H): shutoff 4/3 H, max flow 2 Q, quadratic.
    const auto [q, h] = si.front();
    if (!(q > 0.0 && h > 0.0))
      throw std::invalid_argument("single-point pump curve " + c.id + " needs Q, H > 0");
    return {4.0 / 3.0 * h, h / 3.0 / (q * q), 2.0};
  }
  if (si.size() == 3) {
    try {
      return fit_pump_curve(si);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("curve " + c.id + ": " + e.what());
    }
  }
  throw std::invalid_argument("curve " + c.id + ": pump curves need 1 or 3 points");
}

}  // namespace wdn
