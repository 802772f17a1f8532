#include <array>
#include <stdexcept>

#include "wdn/demand.hpp"
#include "wdn/rng.hpp"

namespace wdn {

namespace {

using Bank = std::array<std::array<const char*, 3>, kNumLevels>;

// Activities per archetype and level, lowest usage first.
const Bank kResidential = {{
    {"is almost silent with nearly every resident asleep",
     "sits quiet while most apartments are empty for the holiday break",
     "shows hardly any activity beyond a few night owls"},
    {"has only a handful of residents up and about",
     "is calm with most students away at lectures",
     "sees light use as a few residents make a quick snack"},
    {"has a steady trickle of residents doing laundry and cleaning",
     "sees moderate activity as some residents cook at home",
     "has an ordinary flow of people coming and going"},
    {"is busy with many residents showering and preparing meals",
     "has a lively crowd cooking dinner together in the shared kitchens",
     "sees heavy use as residents get ready for the day"},
    {"is packed for a move-in weekend with every shower and washer running",
     "hosts a large floor party with crowded kitchens and bathrooms",
     "hits its rush as nearly all residents shower and cook at once"},
}};

const Bank kAcademicA = {{
    {"is locked and dark with no classes scheduled",
     "stands empty apart from the night security round",
     "has no occupants while the campus is closed"},
    {"has only cleaning staff and an early administrator inside",
     "hosts a few faculty catching up on email in quiet offices",
     "sees a small study group in one seminar room"},
    {"runs a normal schedule of lectures with half full classrooms",
     "has regular office hours and a few seminars underway",
     "sees moderate foot traffic between classes"},
    {"is crowded with back to back lectures and busy restrooms",
     "hosts a department meeting alongside full classrooms",
     "sees heavy traffic as large courses change over"},
    {"holds final exams with every lecture hall at capacity",
     "hosts an open house with visitors filling every floor",
     "runs a conference with crowded halls and a packed coffee station"},
}};

const Bank kAcademicB = {{
    {"has every laboratory shut down for the night",
     "is closed with the library doors locked",
     "sits idle with no experiments running"},
    {"has a lone researcher checking on an overnight experiment",
     "sees a few graduate students reading in the library",
     "runs only the automated equipment in the basement labs"},
    {"has several laboratory sections running routine work",
     "sees a normal crowd of students studying in the library",
     "hosts ordinary lab sessions with rinsing stations in use"},
    {"is busy with teaching labs washing glassware between sessions",
     "has a full library and several research groups at work",
     "runs cooling loops for a long series of experiments"},
    {"is packed during exam week with the library open around the clock",
     "hosts a research symposium with every lab demonstrating",
     "runs every teaching lab at once for a practical exam"},
}};

const Bank kDining = {{
    {"is closed and the kitchen is dark",
     "stays closed while staff are off site",
     "is closed for the night with only refrigeration running"},
    {"has a few cooks prepping ingredients before opening",
     "serves a thin stream of customers at the coffee counter",
     "is mostly quiet with staff wiping down the tables"},
    {"serves a regular crowd at a relaxed pace",
     "runs its usual menu with a steady line at the counter",
     "sees typical traffic while the dishwashers run intermittently"},
    {"is busy with a long queue and the dish machines running nonstop",
     "serves a popular themed meal that draws a big crowd",
     "runs a dining promotion that fills most of the seats"},
    {"hosts a banquet event with the kitchen at full capacity",
     "caters a large social gathering with every station open",
     "serves a holiday feast with lines out the door"},
}};

const Bank& bank_for(Archetype a) {
  switch (a) {
    case Archetype::Residential: return kResidential;
    case Archetype::AcademicA: return kAcademicA;
    case Archetype::AcademicB: return kAcademicB;
    case Archetype::Dining: return kDining;
  }
  return kResidential;
}

const char* kWeekdays[7] = {"Monday", "Tuesday", "Wednesday", "Thursday",
                            "Friday", "Saturday", "Sunday"};

}  // namespace

std::string weekday_name(int day) {
  return kWeekdays[((day % 7) + 7) % 7];
}

std::string time_of_day_phrase(int hour) {
  if (hour < 0 || hour >= kHoursPerDay) throw std::out_of_range("hour outside 0..23");
  if (hour < 5) return "in the small hours of the night";
  if (hour < 8) return "early in the morning";
  if (hour < 12) return "during the morning";
  if (hour < 14) return "around midday";
  if (hour < 17) return "during the afternoon";
  if (hour < 21) return "in the evening";
  return "late at night";
}

EventRecord render_event_text(int region, Archetype archetype, int day, int hour, int level,
                              std::uint64_t seed) {
  if (level < 0 || level >= kNumLevels) throw std::out_of_range("level outside 0..4");
  Engine eng = make_engine({seed, static_cast<std::uint64_t>(region),
                            static_cast<std::uint64_t>(day), static_cast<std::uint64_t>(hour),
                            static_cast<std::uint64_t>(level)});
  std::uniform_int_distribution<int> pick(0, 2);
  const auto& choices = bank_for(archetype)[static_cast<std::size_t>(level)];
  std::string text = "On " + weekday_name(day) + " " + time_of_day_phrase(hour) + ", the " +
                     archetype_description(archetype) + " " +
                     choices[static_cast<std::size_t>(pick(eng))] + ".";
  return EventRecord{region, archetype, day, hour, std::move(text), level};
}

std::vector<EventRecord> render_events(const DemandDataset& dataset,
                                       std::span<const int> region_level_matrix,
                                       std::uint64_t seed) {
  const int regions = dataset.region_count();
  const int hours = dataset.hours();
  if (region_level_matrix.size() != static_cast<std::size_t>(regions) * static_cast<std::size_t>(hours))
    throw std::invalid_argument("region level matrix has the wrong shape");
  std::vector<EventRecord> out;
  out.reserve(region_level_matrix.size());
  for (int r = 1; r <= regions; ++r) {
    const Archetype a = dataset.region_archetype(r);
    for (int t = 0; t < hours; ++t)
      out.push_back(render_event_text(
          r, a, t / kHoursPerDay, t % kHoursPerDay,
          region_level_matrix[static_cast<std::size_t>(r - 1) * static_cast<std::size_t>(hours) +
                              static_cast<std::size_t>(t)],
          seed));
  }
  return out;
}

}  // namespace wdn
