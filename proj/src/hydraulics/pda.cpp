#include <cmath>
#include <stdexcept>

#include "wdn/hydraulics.hpp"

namespace wdn {

void PdaParams::validate() const {
  if (!(p_min < p_req)) throw std::invalid_argument("PDA: p_min must be < p_req");
  if (!(p_exp > 0.0)) throw std::invalid_argument("PDA: p_exp must be > 0");
  if (!(smoothing_eps > 0.0 && smoothing_eps < (p_req - p_min) / 4.0))
    throw std::invalid_argument("PDA: smoothing_eps must be in (0, (p_req - p_min)/4)");
}

namespace {

struct Hermite {
  double x0, y0, m0, y1, m1, width;

  double value(double x) const {
    const double t = (x - x0) / width;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * width * m0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * width * m1;
  }

  double slope(double x) const {
    const double t = (x - x0) / width;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * width * m0 +
            (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * width * m1) /
           width;
  }
};

double wagner(double p, const PdaParams& k) {
  return std::pow((p - k.p_min) / (k.p_req - k.p_min), k.p_exp);
}

double wagner_slope(double p, const PdaParams& k) {
  const double range = k.p_req - k.p_min;
  return k.p_exp / range * std::pow((p - k.p_min) / range, k.p_exp - 1.0);
}

Hermite low_blend(const PdaParams& k) {
  const double x1 = k.p_min + k.smoothing_eps;
  return {k.p_min, 0.0, 0.0, wagner(x1, k), wagner_slope(x1, k), k.smoothing_eps};
}

Hermite high_blend(const PdaParams& k) {
  const double x0 = k.p_req - k.smoothing_eps;
  return {x0, wagner(x0, k), wagner_slope(x0, k), 1.0, 0.0, k.smoothing_eps};
}

}  // namespace

double pda_factor(double p, const PdaParams& k) {
  if (p <= k.p_min) return 0.0;
  if (p >= k.p_req) return 1.0;
  if (p < k.p_min + k.smoothing_eps) return low_blend(k).value(p);
  if (p > k.p_req - k.smoothing_eps) return high_blend(k).value(p);
  return wagner(p, k);
}

double pda_slope(double p, const PdaParams& k) {
  if (p <= k.p_min || p >= k.p_req) return 0.0;
  if (p < k.p_min + k.smoothing_eps) return low_blend(k).slope(p);
  if (p > k.p_req - k.smoothing_eps) return high_blend(k).slope(p);
  return wagner_slope(p, k);
}

}  // namespace wdn
