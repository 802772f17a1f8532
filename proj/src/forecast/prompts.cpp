#include <sstream>
#include <stdexcept>

#include "wdn/forecast.hpp"

namespace wdn {

std::string default_level_rules() {
  return "Level 0: negligible use; the facility is closed, empty or asleep.\n"
         "Level 1: light use; only a few people or staff are present.\n"
         "Level 2: moderate use; ordinary routine activity.\n"
         "Level 3: heavy use; busy periods such as meal rushes or full classes.\n"
         "Level 4: peak use; crowds, special events or everyone using water at once.\n";
}

std::vector<std::pair<std::string, std::string>> PromptBundle::messages() const {
  std::ostringstream user;
  if (!icl_examples.empty()) {
    user << "Historical examples:\n";
    for (const auto& [text, level] : icl_examples)
      user << "Description: " << text << "\nLevel: " << level << "\n";
    user << "\n";
  }
  user << query;
  return {{"system", system}, {"user", user.str()}};
}

PromptBundle build_prediction_prompt(const std::string& event_text, Archetype building_type,
                                     std::span<const EventRecord> icl_examples, int window,
                                     const std::string& level_rules) {
  if (event_text.empty()) throw std::invalid_argument("prediction prompt needs event text");
  if (window != 2 && window != 4 && window != 6)
    throw std::invalid_argument("prediction window must be 2, 4 or 6");
  if (icl_examples.empty()) throw std::invalid_argument("prediction prompt needs examples");

  PromptBundle p;
  p.system =
      "You are an expert in community water operations who infers water demand levels from "
      "descriptions of what is happening in a building. Demand is classified into five levels:\n" +
      level_rules;
  for (const auto& e : icl_examples) p.icl_examples.emplace_back(e.text, e.level);

  std::string schema = "{\"levels\":[";
  for (int k = 0; k < window; ++k) schema += k == 0 ? "<level>" : ",<level>";
  schema += "]}";
  p.expected_format = "A JSON object " + schema + " with " + std::to_string(window) +
                      " integers from 0 to 4, one per hour in order.";

  std::ostringstream q;
  q << "Building category: " << archetype_description(building_type) << "\n"
    << "Event: " << event_text << "\n\n"
    << "Given this event, predict the water demand level for each of the next " << window
    << " hours in this zone. Explain your reasoning briefly by relating the event to the "
       "historical examples, then finish with exactly one JSON object of the form "
    << schema << " containing " << window << " integers from 0 to 4.";
  p.query = q.str();
  return p;
}

PromptBundle build_generation_prompt(Archetype building_type, const std::string& date_info,
                                     int level, const std::string& level_rules) {
  if (level < 0 || level >= kNumLevels) throw std::invalid_argument("level outside 0..4");
  static const char* guidance[kNumLevels] = {
      "Describe a time when the building is closed or nobody is using water.",
      "Describe light activity with only a few occupants.",
      "Describe an ordinary routine period.",
      "Describe a busy period with many people using water.",
      "Describe a high-usage situation such as a crowded special event or gathering."};
  PromptBundle p;
  p.system =
      "You are an expert in community water operations who writes short, realistic "
      "descriptions of building activity. Demand is classified into five levels:\n" +
      level_rules;
  p.expected_format = "One or two plain sentences without any digits.";
  std::ostringstream q;
  q << "Building category: " << archetype_description(building_type) << "\n"
    << "Date: " << date_info << "\n"
    << "Target usage: level " << level << ". " << guidance[level] << "\n\n"
    << "Write a concise event description consistent with this usage level. You may add "
       "plausible campus happenings, for example a festival, a club meeting or a food "
       "promotion. Do not state the level or any number.";
  p.query = q.str();
  return p;
}

EventRecord llm_event_text(ChatClient& client, const std::string& session_id, int region,
                           Archetype archetype, int day, int hour, int level,
                           std::uint64_t seed, const std::string& level_rules) {
  EventRecord fallback = render_event_text(region, archetype, day, hour, level, seed);
  const std::string date = weekday_name(day) + ", " + time_of_day_phrase(hour);
  try {
    std::string text = client.call(session_id,
                                   build_generation_prompt(archetype, date, level, level_rules)
                                       .messages());
    while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
    if (text.empty()) return fallback;
    fallback.text = std::move(text);
  } catch (const std::exception&) {
  }
  return fallback;
}

}  // namespace wdn
