#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

namespace freshfunnel {

using ItemId = std::uint64_t;
using UserId = std::uint32_t;
using ProviderId = std::uint32_t;
using Tick = std::int64_t;

// One tick is 15 simulated minutes; one simulated day is 96 ticks.
inline constexpr int kTicksPerDay = 96;
inline constexpr std::size_t kHistoryCapacity = 500;
// A "positive interaction" everywhere in this codebase: a click followed by
// at least this much dwell.
inline constexpr double kGoodClickDwellSeconds = 10.0;

// Floor division so that negative upload ticks land on negative days.
inline Tick day_of(Tick tick) {
  Tick d = tick / kTicksPerDay;
  if (tick % kTicksPerDay != 0 && tick < 0) --d;
  return d;
}

enum class ActivityLevel : std::uint8_t { core = 0, casual = 1, emerging = 2 };
enum class SlotKind : std::uint8_t { main = 0, dedicated = 1 };
enum class Funnel : std::uint8_t { low = 0, mid = 1 };
enum class Provenance : std::uint8_t { none = 0, low_funnel = 1, mid_funnel = 2 };

struct Provider {
  ProviderId provider_id = 0;
  double base_upload_rate = 0.0;  // expected uploads per simulated day
  double responsiveness = 0.0;    // exposure -> upload-rate boost factor
  double quality_mean = 0.5;      // in (0,1)
};

struct ContentItem {
  ItemId item_id = 0;
  ProviderId provider_id = 0;
  Tick upload_tick = 0;
  int topic_id = 0;
  std::vector<int> fine_category_ids;  // non-empty
  int language_id = 0;
  double avg_rating = 0.0;    // visible to models
  double latent_quality = 0.0;  // read only by the user-response model
  long long positive_interactions = 0;
  long long impressions = 0;
};

struct InteractionRecord {
  ItemId item_id = 0;
  double dwell_seconds = 0.0;
  Tick tick = 0;
  long long position = 0;  // monotone per-user engagement index
};

struct SimUser {
  UserId user_id = 0;
  std::vector<double> pref_vector;  // non-negative, sums to 1
  ActivityLevel activity_level = ActivityLevel::casual;
  std::deque<InteractionRecord> history;  // bounded by kHistoryCapacity
  long long next_position = 0;
};

struct Event {
  std::uint64_t event_id = 0;
  Tick tick = 0;
  UserId user_id = 0;
  ItemId item_id = 0;
  std::uint32_t arm_id = 0;
  SlotKind slot_kind = SlotKind::main;
  Provenance provenance = Provenance::none;
  bool impressed = false;
  bool clicked = false;
  double dwell_seconds = 0.0;
};

inline bool is_positive(const Event& e) {
  return e.clicked && e.dwell_seconds >= kGoodClickDwellSeconds;
}

// Append-only event stream. Event ids are assigned on append; the tick-order
// and clicked-implies-impressed invariants are enforced here so every
// consumer can rely on them.
class EventLog {
 public:
  std::uint64_t append(Event e) {
    if (!events_.empty() && e.tick < events_.back().tick)
      throw std::logic_error("EventLog: ticks must be non-decreasing");
    if (e.clicked && !e.impressed)
      throw std::logic_error("EventLog: clicked event without impression");
    e.event_id = next_id_++;
    events_.push_back(e);
    return e.event_id;
  }

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }

 private:
  std::vector<Event> events_;
  std::uint64_t next_id_ = 0;
};

}  // namespace freshfunnel
