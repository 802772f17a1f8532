#include <json.hpp>

#include "wdn/forecast.hpp"

namespace wdn {

namespace {

// End of the balanced {...} starting at `open`, skipping string literals.
std::size_t object_end(const std::string& s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::string::npos;
}

}  // namespace

std::vector<int> parse_level_response(const std::string& raw, int window) {
  using Kind = ParseError::Kind;
  nlohmann::json obj;
  bool found = false;
  for (std::size_t open = raw.find('{'); open != std::string::npos;
       open = raw.find('{', open + 1)) {
    const std::size_t close = object_end(raw, open);
    if (close == std::string::npos) break;
    obj = nlohmann::json::parse(raw.begin() + static_cast<std::ptrdiff_t>(open),
                                raw.begin() + static_cast<std::ptrdiff_t>(close) + 1, nullptr,
                                false);
    if (!obj.is_discarded() && obj.is_object()) {
      found = true;
      break;
    }
  }
  if (!found) throw ParseError(Kind::NoJsonObject, "response contains no JSON object");
  const auto it = obj.find("levels");
  if (it == obj.end() || !it->is_array())
    throw ParseError(Kind::Malformed, "JSON object has no \"levels\" array");
  if (static_cast<int>(it->size()) != window)
    throw ParseError(Kind::WrongLength, "expected " + std::to_string(window) + " levels, got " +
                                            std::to_string(it->size()));
  std::vector<int> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& v = (*it)[i];
    if (!v.is_number_integer())
      throw ParseError(Kind::Malformed, "level at index " + std::to_string(i) +
                                            " is not an integer", static_cast<int>(i));
    const auto level = v.get<long long>();
    if (level < 0 || level > 4)
      throw ParseError(Kind::OutOfRange, "level at index " + std::to_string(i) + " is " +
                                             std::to_string(level) + ", outside 0..4",
                       static_cast<int>(i));
    out.push_back(static_cast<int>(level));
  }
  return out;
}

}  // namespace wdn
