#pragma once
// Synthetic hourly demand, five-level discretization, chronological split,
// and event narratives.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdn/network.hpp"

namespace wdn {

enum class Archetype { Residential, AcademicA, AcademicB, Dining };

inline constexpr int kNumLevels = 5;
inline constexpr int kHoursPerDay = 24;
inline constexpr int kDatasetDays = 123;

std::string archetype_name(Archetype a);
std::optional<Archetype> archetype_from_name(const std::string& name);
// Human wording used in prompts and narratives ("residential area", ...).
std::string archetype_description(Archetype a);

struct GeneratorConfig {
  // Diurnal profile per archetype (index = Archetype), peak near 1.
  std::array<std::array<double, kHoursPerDay>, 4> profiles;
  std::array<double, 4> weekday_multiplier;
  std::array<double, 4> weekend_multiplier;
  double noise_sigma = 0.10;  // node-hour lognormal noise
  double day_sigma = 0.20;    // region-day lognormal noise (shared by a region)
  double scale_min = 0.00025;  // m^3/s at profile 1.0
  double scale_max = 0.000625;
  int days = kDatasetDays;
  std::map<int, Archetype> region_archetype;

  static GeneratorConfig defaults();
};

struct DemandDataset {
  std::vector<std::string> junctions;  // network junction order
  std::vector<int> region;
  std::vector<Archetype> archetype;
  std::vector<double> scale;
  std::vector<std::array<double, 4>> level_edges;
  int days = 0;
  std::vector<double> values;  // junction-major, junctions.size() x hours()
  std::uint64_t seed = 0;

  int hours() const { return days * kHoursPerDay; }
  double value(std::size_t junction, int hour) const;
  std::span<const double> row(std::size_t junction) const;
  int region_count() const;
  Archetype region_archetype(int region) const;
  // Requested demand per network node index for one hour.
  std::vector<double> node_demands(const Network& net, int hour) const;
};

DemandDataset generate_dataset(const Network& net, const GeneratorConfig& config,
                               std::uint64_t seed);

// Builds a dataset around externally supplied values (e.g. a demand CSV).
DemandDataset dataset_from_values(const Network& net, const GeneratorConfig& config,
                                  std::vector<double> values, int days);

// Thresholds d_max/16, d_max/8, d_max/4, d_max/2.
std::array<double, 4> compute_level_edges(std::span<const double> series);
int level_of(double demand, const std::array<double, 4>& edges);

// Levels 0..4, junction-major like DemandDataset::values.
std::vector<int> discretize(const DemandDataset& dataset);

// Region level per hour: lower median of the member junction levels.
// Region-major: region_count() x hours(), region r at row r-1.
std::vector<int> region_levels(const DemandDataset& dataset, std::span<const int> node_levels);

struct DatasetSplit {
  int train_days = 0;
  int test_days = 0;
  int first_test_day() const { return train_days; }
};

DatasetSplit split_dataset(const DemandDataset& dataset);

struct EventRecord {
  int region = 1;
  Archetype building_type = Archetype::Residential;
  int day = 0;
  int hour = 0;
  std::string text;
  int level = 0;

  bool operator==(const EventRecord&) const = default;
};

EventRecord render_event_text(int region, Archetype archetype, int day, int hour, int level,
                              std::uint64_t seed);

// One event per (region, hour) of the dataset, from the region levels.
std::vector<EventRecord> render_events(const DemandDataset& dataset,
                                       std::span<const int> region_level_matrix,
                                       std::uint64_t seed);

bool is_weekend(int day);
std::string weekday_name(int day);
std::string time_of_day_phrase(int hour);

// Demand CSV: header `node_id,hour,demand_m3s`; '#' lines carry metadata.
void write_demand_csv(const std::string& path, const DemandDataset& dataset,
                      const std::string& metadata_json);
// Returns junction-major values for the network's junctions and the day count.
std::pair<std::vector<double>, int> read_demand_csv(const std::string& path, const Network& net);

std::string event_to_json(const EventRecord& e);
EventRecord event_from_json(const std::string& line);
void write_events_jsonl(const std::string& path, std::span<const EventRecord> events);
std::vector<EventRecord> read_events_jsonl(const std::string& path);

}  // namespace wdn
