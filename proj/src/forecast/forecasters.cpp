#include <algorithm>
#include <stdexcept>

#include "wdn/forecast.hpp"

namespace wdn {

ForecastData ForecastData::from_dataset(const DemandDataset& dataset,
                                        std::vector<EventRecord> events) {
  ForecastData d;
  d.regions = dataset.region_count();
  d.hours = dataset.hours();
  d.levels = region_levels(dataset, discretize(dataset));
  for (int r = 1; r <= d.regions; ++r) d.archetypes.push_back(dataset.region_archetype(r));
  if (!events.empty()) {
    if (events.size() != static_cast<std::size_t>(d.regions) * static_cast<std::size_t>(d.hours))
      throw std::invalid_argument("event list must cover every region-hour");
    // Index region-major regardless of input order.
    d.events.resize(events.size());
    for (auto& e : events) {
      const long long t = static_cast<long long>(e.day) * kHoursPerDay + e.hour;
      if (e.region < 1 || e.region > d.regions || t < 0 || t >= d.hours)
        throw std::invalid_argument("event outside the dataset");
      d.events[static_cast<std::size_t>(e.region - 1) * static_cast<std::size_t>(d.hours) +
               static_cast<std::size_t>(t)] = std::move(e);
    }
  }
  return d;
}

int ForecastData::level(int region, int hour) const {
  if (region < 1 || region > regions) throw std::out_of_range("region out of range");
  const int t = std::clamp(hour, 0, hours - 1);
  return levels[static_cast<std::size_t>(region - 1) * static_cast<std::size_t>(hours) +
                static_cast<std::size_t>(t)];
}

const EventRecord* ForecastData::event(int region, int hour) const {
  if (events.empty() || region < 1 || region > regions) return nullptr;
  const int t = std::clamp(hour, 0, hours - 1);
  return &events[static_cast<std::size_t>(region - 1) * static_cast<std::size_t>(hours) +
                 static_cast<std::size_t>(t)];
}

namespace {

void check_window(int window) {
  if (!valid_window(window)) throw std::invalid_argument("forecast window must be 0, 2, 4 or 6");
}

}  // namespace

OracleForecaster::OracleForecaster(std::shared_ptr<const ForecastData> data, int window)
    : data_(std::move(data)), window_(window) {
  check_window(window);
}

ForecastWindow OracleForecaster::forecast(int issue_hour) {
  ForecastWindow f{issue_hour, window_, {}};
  f.levels.resize(static_cast<std::size_t>(data_->regions));
  for (int r = 1; r <= data_->regions; ++r)
    for (int k = 1; k <= window_; ++k)
      f.levels[static_cast<std::size_t>(r - 1)].push_back(data_->level(r, issue_hour + k));
  return f;
}

PersistenceForecaster::PersistenceForecaster(std::shared_ptr<const ForecastData> data, int window)
    : data_(std::move(data)), window_(window) {
  check_window(window);
}

ForecastWindow PersistenceForecaster::forecast(int issue_hour) {
  ForecastWindow f{issue_hour, window_, {}};
  f.levels.resize(static_cast<std::size_t>(data_->regions));
  for (int r = 1; r <= data_->regions; ++r) {
    const int last = issue_hour >= 0 ? data_->level(r, issue_hour) : 0;
    f.levels[static_cast<std::size_t>(r - 1)].assign(static_cast<std::size_t>(window_), last);
  }
  return f;
}

LlmForecaster::LlmForecaster(std::shared_ptr<const ForecastData> data,
                             std::shared_ptr<ChatClient> client,
                             std::vector<EventRecord> icl_library, int window,
                             LlmForecasterOptions options)
    : data_(std::move(data)),
      client_(std::move(client)),
      library_(std::move(icl_library)),
      window_(window),
      options_(std::move(options)),
      fallback_(data_, window) {
  check_window(window);
  if (!client_) throw std::invalid_argument("LLM forecaster needs a chat client");
}

ForecastWindow LlmForecaster::forecast(int issue_hour) {
  ForecastWindow f = fallback_.forecast(issue_hour);
  if (window_ == 0) return f;
  for (int r = 1; r <= data_->regions; ++r)
    f.levels[static_cast<std::size_t>(r - 1)] = predict_region(issue_hour, r);
  return f;
}

std::vector<int> LlmForecaster::predict_region(int issue_hour, int region) {
  const Archetype a = data_->archetypes[static_cast<std::size_t>(region - 1)];
  auto fallback = [&](std::string reason) {
    fallbacks_.push_back({issue_hour, region, std::move(reason)});
    const int last = issue_hour >= 0 ? data_->level(region, issue_hour) : 0;
    return std::vector<int>(static_cast<std::size_t>(window_), last);
  };
  const EventRecord* event = data_->event(region, issue_hour + 1);
  if (!event || event->text.empty()) return fallback("no event text");

  auto cached = icl_cache_.find(a);
  if (cached == icl_cache_.end()) {
    try {
      cached = icl_cache_
                   .emplace(a, select_icl_examples(library_, a, options_.icl_examples,
                                                   options_.seed))
                   .first;
    } catch (const std::exception& e) {
      return fallback(std::string("example selection failed: ") + e.what());
    }
  }
  const PromptBundle prompt =
      build_prediction_prompt(event->text, a, cached->second, window_, options_.level_rules);
  const std::string session = options_.session_prefix + "/region-" + std::to_string(region);
  std::string last_error;
  for (int attempt = 0; attempt <= options_.parse_retries; ++attempt) {
    try {
      ++calls_;
      const std::string reply = client_->call(session, prompt.messages());
      return parse_level_response(reply, window_);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  return fallback(last_error);
}

}  // namespace wdn
