#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "freshfunnel/types.hpp"

namespace freshfunnel::metrics {

// Immutable item metadata the corpus metrics need besides the raw events.
struct ItemMeta {
  ItemId item_id = 0;
  ProviderId provider_id = 0;
  Tick upload_tick = 0;
  int topic_id = 0;
};

class Catalog {
 public:
  void add(const ItemMeta& m) {
    by_id_.emplace(m.item_id, items_.size());
    items_.push_back(m);
  }
  const ItemMeta* find(ItemId id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &items_[it->second];
  }
  const std::vector<ItemMeta>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<ItemMeta> items_;
  std::unordered_map<ItemId, std::size_t> by_id_;
};

inline bool is_fresh_at(const ItemMeta& m, Tick tick, int window_days) {
  return tick - m.upload_tick <= static_cast<Tick>(window_days) * kTicksPerDay;
}

struct DuicOptions {
  bool include_dedicated = true;  // count dedicated-slot impressions
  bool fresh_only = false;
  int freshness_window_days = 7;
  const Catalog* catalog = nullptr;  // required when fresh_only
};

// Number of distinct items receiving at least K impressions on `day`.
long long duic(const EventLog& log, long long K, Tick day,
               const DuicOptions& opt = {});

// One pass over the log; values agree with per-day duic().
std::map<Tick, long long> duic_series(const EventLog& log, long long K,
                                      const DuicOptions& opt = {});

// Items accumulating >= X positive interactions in main (non-dedicated) slots
// within Y days of upload.
long long discoverable_corpus(const EventLog& log, const Catalog& catalog,
                              long long X, int Y_days);

// Same count split by upload day, for day-resampled confidence intervals.
std::map<Tick, long long> discoverable_by_cohort(const EventLog& log,
                                                 const Catalog& catalog,
                                                 long long X, int Y_days);

struct Scope {
  std::optional<SlotKind> slot;
  std::optional<Provenance> provenance;
  std::optional<ActivityLevel> group;
  const std::unordered_map<UserId, ActivityLevel>* user_groups = nullptr;
  bool fresh_only = false;
  const Catalog* catalog = nullptr;
  int freshness_window_days = 7;
  std::optional<Tick> day;
};

bool in_scope(const Event& e, const Scope& s);

// Good clicks over impressions in scope; absent when the scope has no
// impressions (not zero).
std::optional<double> good_ctr(const EventLog& log, const Scope& scope);

struct DwellAggregates {
  double fresh_dwell = 0.0;
  double overall_dwell = 0.0;
  double small_provider_dwell = 0.0;
};

// Providers in the bottom `bottom_fraction` by cumulative impressions over the
// whole log (ties to the smaller provider id; zero-impression providers from
// the catalog included).
std::set<ProviderId> small_providers(const EventLog& log,
                                     const Catalog& catalog,
                                     double bottom_fraction);

DwellAggregates dwell_aggregates(const EventLog& log, const Catalog& catalog,
                                 std::optional<Tick> day,
                                 const std::set<ProviderId>& small,
                                 int freshness_window_days);

// Positive interactions landing on items at most `window_days` old, any slot.
long long fresh_positive_interactions(const EventLog& log,
                                      const Catalog& catalog, Tick day,
                                      int window_days);

// Gini coefficient of per-item impression counts over items with at least one
// impression in [day_lo, day_hi]; absent when there are no impressions.
std::optional<double> impression_gini(const EventLog& log, Tick day_lo,
                                      Tick day_hi);

}  // namespace freshfunnel::metrics
