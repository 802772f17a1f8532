#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wdn/controller.hpp"

namespace wdn {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "wdn-policy-v1";

json block(const char* name, int rows, int cols, std::span<const double> values) {
  return {{"name", name},
          {"rows", rows},
          {"cols", cols},
          {"length", values.size()},
          {"values", std::vector<double>(values.begin(), values.end())}};
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointInfo& info) {
  const auto& p = info.params;
  const auto& d = p.dims();
  json j;
  j["format"] = kFormat;
  j["dims"] = {{"input", d.input}, {"hidden", d.hidden}, {"output", d.output}};
  j["window"] = info.window;
  j["seed"] = info.seed;
  j["layers"] = json::array({block("W1", d.hidden, d.input, p.w1()),
                             block("b1", d.hidden, 1, p.b1()),
                             block("W2", d.hidden, d.hidden, p.w2()),
                             block("b2", d.hidden, 1, p.b2()),
                             block("W3", d.output, d.hidden, p.w3()),
                             block("b3", d.output, 1, p.b3())});
  j["config"] = info.config_json.empty() ? json::object() : json::parse(info.config_json);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out << j.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

CheckpointInfo load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": not a JSON checkpoint: " + e.what());
  }
  if (j.value("format", "") != kFormat)
    throw std::runtime_error(path + ": unknown checkpoint format");
  PolicyDims d;
  d.input = j.at("dims").at("input").get<int>();
  d.hidden = j.at("dims").at("hidden").get<int>();
  d.output = j.at("dims").at("output").get<int>();
  const int rows[6] = {d.hidden, d.hidden, d.hidden, d.hidden, d.output, d.output};
  const int cols[6] = {d.input, 1, d.hidden, 1, d.hidden, 1};
  const auto& layers = j.at("layers");
  if (!layers.is_array() || layers.size() != 6)
    throw std::runtime_error(path + ": expected six layer blocks");
  std::vector<double> theta;
  theta.reserve(static_cast<std::size_t>(d.parameter_count()));
  for (std::size_t b = 0; b < 6; ++b) {
    const auto& l = layers[b];
    const auto values = l.at("values").get<std::vector<double>>();
    const auto expected = static_cast<std::size_t>(rows[b]) * static_cast<std::size_t>(cols[b]);
    if (l.at("rows").get<int>() != rows[b] || l.at("cols").get<int>() != cols[b] ||
        l.at("length").get<std::size_t>() != expected || values.size() != expected)
      throw std::runtime_error(path + ": layer block " + l.value("name", "?") +
                               " has inconsistent dimensions");
    theta.insert(theta.end(), values.begin(), values.end());
  }
  CheckpointInfo info{PolicyParams(d, std::move(theta)), j.value("window", 0),
                      j.value("seed", std::uint64_t{0}), j.at("config").dump()};
  return info;
}

}  // namespace wdn
