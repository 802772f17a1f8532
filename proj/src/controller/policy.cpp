#include <cmath>
#include <stdexcept>

#include "wdn/controller.hpp"
#include "wdn/rng.hpp"
#include "wdn/simd/kernels.hpp"

namespace wdn {

PolicyDims policy_dims(const Network& net, int window, int hidden) {
  if (window < 0) throw std::invalid_argument("window must be >= 0");
  if (hidden <= 0) throw std::invalid_argument("hidden width must be positive");
  PolicyDims d;
  d.input = static_cast<int>(net.interest_nodes().size()) + 2 + window * net.region_count();
  d.hidden = hidden;
  d.output = static_cast<int>(net.controlled_pumps().size() + net.valves().size());
  if (d.output == 0) throw std::invalid_argument("network has no controllable components");
  return d;
}

PolicyParams::PolicyParams(PolicyDims dims, std::vector<double> theta)
    : dims_(dims), theta_(std::move(theta)) {
  if (dims_.input <= 0 || dims_.hidden <= 0 || dims_.output <= 0)
    throw std::invalid_argument("policy dimensions must be positive");
  if (theta_.size() != static_cast<std::size_t>(dims_.parameter_count()))
    throw std::invalid_argument("parameter vector has " + std::to_string(theta_.size()) +
                                " entries, expected " +
                                std::to_string(dims_.parameter_count()));
}

PolicyParams PolicyParams::unflatten(PolicyDims dims, std::span<const double> theta) {
  return PolicyParams(dims, std::vector<double>(theta.begin(), theta.end()));
}

namespace {

struct Offsets {
  std::size_t w1, b1, w2, b2, w3, b3, end;
};

Offsets offsets(const PolicyDims& d) {
  const auto in = static_cast<std::size_t>(d.input);
  const auto h = static_cast<std::size_t>(d.hidden);
  const auto out = static_cast<std::size_t>(d.output);
  Offsets o{};
  o.w1 = 0;
  o.b1 = o.w1 + h * in;
  o.w2 = o.b1 + h;
  o.b2 = o.w2 + h * h;
  o.w3 = o.b2 + h;
  o.b3 = o.w3 + out * h;
  o.end = o.b3 + out;
  return o;
}

}  // namespace

std::span<const double> PolicyParams::w1() const {
  const auto o = offsets(dims_);
  return std::span<const double>(theta_).subspan(o.w1, o.b1 - o.w1);
}
std::span<const double> PolicyParams::b1() const {
  const auto o = offsets(dims_);
  return std::span<const double>(theta_).subspan(o.b1, o.w2 - o.b1);
}
std::span<const double> PolicyParams::w2() const {
  const auto o = offsets(dims_);
  return std::span<const double>(theta_).subspan(o.w2, o.b2 - o.w2);
}
std::span<const double> PolicyParams::b2() const {
  const auto o = offsets(dims_);
  return std::span<const double>(theta_).subspan(o.b2, o.w3 - o.b2);
}
std::span<const double> PolicyParams::w3() const {
  const auto o = offsets(dims_);
  return std::span<const double>(theta_).subspan(o.w3, o.b3 - o.w3);
}
std::span<const double> PolicyParams::b3() const {
  const auto o = offsets(dims_);
  return std::span<const double>(theta_).subspan(o.b3, o.end - o.b3);
}

PolicyParams init_policy(PolicyDims dims, std::uint64_t seed) {
  std::vector<double> theta(static_cast<std::size_t>(dims.parameter_count()), 0.0);
  const auto o = offsets(dims);
  Engine eng = make_engine({seed, 0x706f6c696379ULL});
  auto fill = [&](std::size_t from, int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    const auto n = static_cast<std::size_t>(fan_in) * static_cast<std::size_t>(fan_out);
    for (std::size_t i = 0; i < n; ++i) theta[from + i] = u(eng);
  };
  fill(o.w1, dims.input, dims.hidden);
  fill(o.w2, dims.hidden, dims.hidden);
  fill(o.w3, dims.hidden, dims.output);
  return PolicyParams(dims, std::move(theta));
}

std::vector<double> policy_forward(const PolicyParams& params, std::span<const double> obs) {
  const auto& d = params.dims();
  if (obs.size() != static_cast<std::size_t>(d.input))
    throw std::invalid_argument("observation has " + std::to_string(obs.size()) +
                                " entries, policy expects " + std::to_string(d.input));
  const auto& k = simd::kernels();
  std::vector<double> h1(static_cast<std::size_t>(d.hidden));
  std::vector<double> h2(static_cast<std::size_t>(d.hidden));
  std::vector<double> out(static_cast<std::size_t>(d.output));
  k.gemv_bias(params.w1(), obs, params.b1(), h1);
  for (double& v : h1) v = std::tanh(v);
  k.gemv_bias(params.w2(), h1, params.b2(), h2);
  for (double& v : h2) v = std::tanh(v);
  k.gemv_bias(params.w3(), h2, params.b3(), out);
  return out;
}

}  // namespace wdn
