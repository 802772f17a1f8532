#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wdn/demand.hpp"
#include "wdn/rng.hpp"

namespace wdn {

namespace {

// FNV-1a, so stream seeds depend on ids rather than declaration order.
std::uint64_t id_hash(const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t kScaleTag = 1;
constexpr std::uint64_t kNoiseTag = 2;
constexpr std::uint64_t kDayTag = 3;

}  // namespace

bool is_weekend(int day) { return day % 7 >= 5; }

std::string archetype_name(Archetype a) {
  switch (a) {
    case Archetype::Residential: return "Residential";
    case Archetype::AcademicA: return "AcademicA";
    case Archetype::AcademicB: return "AcademicB";
    case Archetype::Dining: return "Dining";
  }
  return "Residential";
}

std::optional<Archetype> archetype_from_name(const std::string& name) {
  for (Archetype a : {Archetype::Residential, Archetype::AcademicA, Archetype::AcademicB,
                      Archetype::Dining})
    if (archetype_name(a) == name) return a;
  return std::nullopt;
}

std::string archetype_description(Archetype a) {
  switch (a) {
    case Archetype::Residential: return "residential area";
    case Archetype::AcademicA: return "academic building (classrooms and offices)";
    case Archetype::AcademicB: return "academic building (laboratories and library)";
    case Archetype::Dining: return "dining facility";
  }
  return "residential area";
}

GeneratorConfig GeneratorConfig::defaults() {
  GeneratorConfig c;
  c.profiles[static_cast<int>(Archetype::Residential)] = {
      0.05, 0.03, 0.03, 0.03, 0.05, 0.15, 0.55, 1.00, 0.90, 0.55, 0.40, 0.40,
      0.45, 0.40, 0.35, 0.35, 0.45, 0.65, 0.85, 0.95, 0.80, 0.55, 0.30, 0.12};
  c.profiles[static_cast<int>(Archetype::AcademicA)] = {
      0.03, 0.03, 0.03, 0.03, 0.03, 0.04, 0.08, 0.30, 0.75, 0.95, 1.00, 0.95,
      0.85, 0.90, 0.95, 0.85, 0.70, 0.45, 0.25, 0.15, 0.10, 0.06, 0.04, 0.03};
  c.profiles[static_cast<int>(Archetype::AcademicB)] = {
      0.05, 0.04, 0.03, 0.03, 0.03, 0.03, 0.05, 0.10, 0.30, 0.55, 0.75, 0.85,
      0.90, 0.95, 1.00, 0.95, 0.90, 0.80, 0.75, 0.70, 0.55, 0.35, 0.15, 0.08};
  c.profiles[static_cast<int>(Archetype::Dining)] = {
      0.02, 0.02, 0.02, 0.02, 0.02, 0.05, 0.25, 0.60, 0.55, 0.25, 0.35, 0.85,
      1.00, 0.70, 0.25, 0.20, 0.40, 0.85, 0.95, 0.70, 0.35, 0.15, 0.05, 0.03};
  c.weekday_multiplier = {1.0, 1.0, 1.0, 1.0};
  c.weekend_multiplier = {1.15, 0.35, 0.50, 0.70};
  c.region_archetype = {{1, Archetype::Residential},
                        {2, Archetype::AcademicA},
                        {3, Archetype::AcademicB},
                        {4, Archetype::Dining}};
  return c;
}

double DemandDataset::value(std::size_t junction, int hour) const {
  return values[junction * static_cast<std::size_t>(hours()) + static_cast<std::size_t>(hour)];
}

std::span<const double> DemandDataset::row(std::size_t junction) const {
  return {values.data() + junction * static_cast<std::size_t>(hours()),
          static_cast<std::size_t>(hours())};
}

int DemandDataset::region_count() const {
  int r = 0;
  for (int x : region) r = std::max(r, x);
  return r;
}

Archetype DemandDataset::region_archetype(int r) const {
  for (std::size_t j = 0; j < region.size(); ++j)
    if (region[j] == r) return archetype[j];
  throw std::out_of_range("no junction in region " + std::to_string(r));
}

std::vector<double> DemandDataset::node_demands(const Network& net, int hour) const {
  std::vector<double> d(net.nodes().size(), 0.0);
  const auto& idx = net.junction_indices();
  for (std::size_t j = 0; j < idx.size(); ++j) d[idx[j]] = value(j, hour);
  return d;
}

namespace {

DemandDataset skeleton(const Network& net, const GeneratorConfig& config, int days) {
  DemandDataset ds;
  ds.days = days;
  ds.junctions = net.junction_ids();
  for (const auto& id : ds.junctions) {
    const int r = net.region_of(id);
    auto it = config.region_archetype.find(r);
    if (it == config.region_archetype.end())
      throw std::invalid_argument("region " + std::to_string(r) + " has no archetype mapping");
    ds.region.push_back(r);
    ds.archetype.push_back(it->second);
  }
  return ds;
}

void finish_edges(DemandDataset& ds) {
  ds.level_edges.clear();
  // Junctions that never draw water are anchored at the dataset maximum;
  // their levels are 0 either way.
  const double overall = ds.values.empty() ? 0.0 : *std::max_element(ds.values.begin(), ds.values.end());
  const std::array<double, 1> fallback = {overall > 0.0 ? overall : 1.0};
  for (std::size_t j = 0; j < ds.junctions.size(); ++j) {
    const auto row = ds.row(j);
    const bool idle = std::all_of(row.begin(), row.end(), [](double v) { return v <= 0.0; });
    ds.level_edges.push_back(compute_level_edges(idle ? std::span<const double>(fallback) : row));
  }
}

}  // namespace

DemandDataset generate_dataset(const Network& net, const GeneratorConfig& config,
                               std::uint64_t seed) {
  if (config.days <= 0) throw std::invalid_argument("generator needs at least one day");
  if (!(config.scale_min > 0.0 && config.scale_min <= config.scale_max))
    throw std::invalid_argument("generator scale range must be positive and ordered");
  DemandDataset ds = skeleton(net, config, config.days);
  ds.seed = seed;
  const int hours = ds.hours();

  // Region-day factors shared by all junctions of a region.
  std::map<int, std::vector<double>> day_factor;
  for (int r : ds.region) {
    if (day_factor.contains(r)) continue;
    Engine eng = make_engine({seed, kDayTag, static_cast<std::uint64_t>(r)});
    std::normal_distribution<double> normal;
    auto& f = day_factor[r];
    for (int d = 0; d < config.days; ++d) {
      const double z = normal(eng);
      f.push_back(config.day_sigma > 0.0
                      ? std::exp(config.day_sigma * z - 0.5 * config.day_sigma * config.day_sigma)
                      : 1.0);
    }
  }

  ds.values.assign(ds.junctions.size() * static_cast<std::size_t>(hours), 0.0);
  for (std::size_t j = 0; j < ds.junctions.size(); ++j) {
    const std::uint64_t key = id_hash(ds.junctions[j]);
    Engine scale_eng = make_engine({seed, kScaleTag, key});
    std::uniform_real_distribution<double> uniform(config.scale_min, config.scale_max);
    ds.scale.push_back(uniform(scale_eng));

    Engine noise_eng = make_engine({seed, kNoiseTag, key});
    std::normal_distribution<double> normal;
    const int a = static_cast<int>(ds.archetype[j]);
    const auto& daily = day_factor.at(ds.region[j]);
    const double s = config.noise_sigma;
    for (int t = 0; t < hours; ++t) {
      const int day = t / kHoursPerDay;
      const double z = normal(noise_eng);
      const double noise = s > 0.0 ? std::exp(s * z - 0.5 * s * s) : 1.0;
      const double mult =
          (is_weekend(day) ? config.weekend_multiplier[a] : config.weekday_multiplier[a]) *
          daily[static_cast<std::size_t>(day)];
      ds.values[j * static_cast<std::size_t>(hours) + static_cast<std::size_t>(t)] =
          ds.scale[j] * config.profiles[a][static_cast<std::size_t>(t % kHoursPerDay)] * mult *
          noise;
    }
  }
  finish_edges(ds);
  return ds;
}

DemandDataset dataset_from_values(const Network& net, const GeneratorConfig& config,
                                  std::vector<double> values, int days) {
  DemandDataset ds = skeleton(net, config, days);
  if (values.size() != ds.junctions.size() * static_cast<std::size_t>(ds.hours()))
    throw std::invalid_argument("demand values do not match junctions x hours");
  for (double v : values)
    if (!(v >= 0.0)) throw std::invalid_argument("demand values must be >= 0");
  ds.values = std::move(values);
  ds.scale.assign(ds.junctions.size(), 0.0);
  finish_edges(ds);
  return ds;
}

}  // namespace wdn
