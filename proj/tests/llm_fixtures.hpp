#pragma once
// Chat-client fixtures shared by the forecast tests and the acceptance run.

#include <memory>
#include <string>
#include <vector>

#include "stub_server.hpp"
#include "wdn/forecast.hpp"

namespace wdn::test {

// `per_level` rendered events for each level of one building type.
inline std::vector<EventRecord> event_library(Archetype a, int per_level) {
  std::vector<EventRecord> out;
  for (int i = 0; i < per_level; ++i)
    for (int level = 0; level < 5; ++level)
      out.push_back(render_event_text(1, a, i, 8 + level, level, 100 + i));
  return out;
}

inline std::shared_ptr<ChatClient> stub_client(const StubChatServer& stub, int retries = 0) {
  LlmClientConfig cfg;
  cfg.base_url = stub.base_url();
  cfg.model = "stub-model";
  cfg.api_key = "test-key";
  cfg.max_retries = retries;
  cfg.backoff_seconds = 0.01;
  cfg.timeout_seconds = 5.0;
  return std::make_shared<ChatClient>(cfg);
}

struct GoldenRequests {
  std::string prediction;  // W = 6, Dining, five examples
  std::string generation;  // Dining, level 4
};

// Sends the two reference prompts through `client` and returns the request
// bodies the stub received.
inline GoldenRequests send_golden_prompts(const StubChatServer& stub, ChatClient& client) {
  const auto lib = event_library(Archetype::Dining, 2);
  const auto ex = select_icl_examples(lib, Archetype::Dining, 5, 11);
  const auto predict = build_prediction_prompt(
      render_event_text(1, Archetype::Dining, 4, 18, 4, 5).text, Archetype::Dining, ex, 6,
      default_level_rules());
  client.call("predict/region-1", predict.messages());
  const auto generate = build_generation_prompt(Archetype::Dining, "Friday, in the evening", 4,
                                                default_level_rules());
  client.call("generate/region-1", generate.messages());
  const auto bodies = stub.bodies();
  return {bodies.at(bodies.size() - 2), bodies.at(bodies.size() - 1)};
}

inline std::string golden_path(const std::string& name) {
  return std::string(WDN_TEST_DATA) + "/golden/" + name;
}

}  // namespace wdn::test
