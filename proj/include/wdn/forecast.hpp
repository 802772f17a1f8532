#pragma once
// Per-region demand-level forecasters: oracle, persistence and an LLM client.

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wdn/demand.hpp"
#include "wdn/forecast_window.hpp"

namespace wdn {

// True region levels and event texts, both region-major over global hours.
struct ForecastData {
  int regions = 0;
  int hours = 0;
  std::vector<int> levels;
  std::vector<Archetype> archetypes;    // [region - 1]
  std::vector<EventRecord> events;      // empty, or regions x hours

  static ForecastData from_dataset(const DemandDataset& dataset, std::vector<EventRecord> events);
  // Level of `region` at global `hour`, clamped into the dataset.
  int level(int region, int hour) const;
  const EventRecord* event(int region, int hour) const;
};

class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::string name() const = 0;
  virtual int window() const = 0;
  // Levels for hours issue_hour+1 .. issue_hour+window.
  virtual ForecastWindow forecast(int issue_hour) = 0;
};

class OracleForecaster : public Forecaster {
 public:
  OracleForecaster(std::shared_ptr<const ForecastData> data, int window);
  std::string name() const override { return "oracle"; }
  int window() const override { return window_; }
  ForecastWindow forecast(int issue_hour) override;

 private:
  std::shared_ptr<const ForecastData> data_;
  int window_;
};

class PersistenceForecaster : public Forecaster {
 public:
  PersistenceForecaster(std::shared_ptr<const ForecastData> data, int window);
  std::string name() const override { return "persistence"; }
  int window() const override { return window_; }
  ForecastWindow forecast(int issue_hour) override;

 private:
  std::shared_ptr<const ForecastData> data_;
  int window_;
};

// ---- prompts -------------------------------------------------------------

struct PromptBundle {
  std::string system;
  std::vector<std::pair<std::string, int>> icl_examples;
  std::string query;
  std::string expected_format;

  // Chat messages: the system text, then one user message carrying the
  // examples and the query.
  std::vector<std::pair<std::string, std::string>> messages() const;
};

std::string default_level_rules();

std::vector<EventRecord> select_icl_examples(std::span<const EventRecord> library,
                                             Archetype building_type, int k, std::uint64_t seed);

PromptBundle build_prediction_prompt(const std::string& event_text, Archetype building_type,
                                     std::span<const EventRecord> icl_examples, int window,
                                     const std::string& level_rules);

PromptBundle build_generation_prompt(Archetype building_type, const std::string& date_info,
                                     int level, const std::string& level_rules);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { NoJsonObject, Malformed, WrongLength, OutOfRange };
  ParseError(Kind kind, const std::string& what, int index = -1)
      : std::runtime_error(what), kind_(kind), index_(index) {}
  Kind kind() const { return kind_; }
  int index() const { return index_; }

 private:
  Kind kind_;
  int index_;
};

std::vector<int> parse_level_response(const std::string& raw, int window);

// ---- chat client ---------------------------------------------------------

inline constexpr const char* kApiKeyEnv = "WDN_LLM_API_KEY";

struct LlmClientConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  std::string api_key;  // resolved from the environment, never from files
  double temperature = 0.0;
  double timeout_seconds = 30.0;
  int max_retries = 2;
  int session_memory_depth = 4;
  double backoff_seconds = 0.5;  // doubled after every failed attempt

  void validate() const;
  // Defaults with api_key read from `env_var`.
  static LlmClientConfig from_env(const char* env_var = kApiKeyEnv);
};

class ChatError : public std::runtime_error {
 public:
  enum class Kind { Transport, HttpStatus, BadBody, NoChoices };
  ChatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

using ChatMessage = std::pair<std::string, std::string>;  // role, content

class ChatClient {
 public:
  explicit ChatClient(LlmClientConfig config);

  // Sends `messages` with this session's recent exchanges spliced in after
  // any leading system messages; returns the first choice's content.
  std::string call(const std::string& session_id, const std::vector<ChatMessage>& messages);

  // Request body that `call` would send now (no network access).
  std::string request_body(const std::string& session_id,
                           const std::vector<ChatMessage>& messages) const;

  std::size_t memory_size(const std::string& session_id) const;
  const LlmClientConfig& config() const { return config_; }

 private:
  struct Exchange {
    std::string user;
    std::string assistant;
  };

  LlmClientConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::deque<Exchange>> memory_;
};

struct FallbackEvent {
  int issue_hour = 0;
  int region = 0;
  std::string reason;
};

struct LlmForecasterOptions {
  int icl_examples = 5;
  int parse_retries = 1;
  std::uint64_t seed = 0;
  std::string level_rules = default_level_rules();
  std::string session_prefix = "predict";
};

// One prompt per region; failures fall back to persistence for that region.
class LlmForecaster : public Forecaster {
 public:
  LlmForecaster(std::shared_ptr<const ForecastData> data, std::shared_ptr<ChatClient> client,
                std::vector<EventRecord> icl_library, int window,
                LlmForecasterOptions options = {});
  std::string name() const override { return "llm"; }
  int window() const override { return window_; }
  ForecastWindow forecast(int issue_hour) override;

  const std::vector<FallbackEvent>& fallbacks() const { return fallbacks_; }
  std::size_t calls() const { return calls_; }

 private:
  std::vector<int> predict_region(int issue_hour, int region);

  std::shared_ptr<const ForecastData> data_;
  std::shared_ptr<ChatClient> client_;
  std::vector<EventRecord> library_;
  int window_;
  LlmForecasterOptions options_;
  PersistenceForecaster fallback_;
  std::map<Archetype, std::vector<EventRecord>> icl_cache_;
  std::vector<FallbackEvent> fallbacks_;
  std::size_t calls_ = 0;
};

// Narrative for one (region, hour) from the chat client; falls back to the
// template renderer on any failure.
EventRecord llm_event_text(ChatClient& client, const std::string& session_id, int region,
                           Archetype archetype, int day, int hour, int level,
                           std::uint64_t seed, const std::string& level_rules);

}  // namespace wdn
