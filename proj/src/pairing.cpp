#include "wxspeed/pairing.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <tuple>

#include "wxspeed/timeutil.hpp"

namespace wxspeed {

namespace {

constexpr Seconds kDay{86400};

template <typename T, typename Key>
std::map<LinkId, std::vector<T>> group_by_link(const std::vector<T>& items, Key key) {
  std::map<LinkId, std::vector<T>> groups;
  for (const auto& it : items) groups[it.link_id].push_back(it);
  for (auto& [id, v] : groups) {
    std::stable_sort(v.begin(), v.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
  }
  return groups;
}

/// Interval covering t, if any. `intervals` sorted by start and non-overlapping.
const WeatherInterval* governing(std::span<const WeatherInterval> intervals, Instant t) {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](Instant v, const WeatherInterval& w) { return v < w.start; });
  if (it == intervals.begin()) return nullptr;
  --it;
  return t < it->end ? &*it : nullptr;
}

/// Latest speed in [lo, hi] governed by `baseline`.
const SpeedObservation* latest_baseline(std::span<const SpeedObservation> speeds,
                                        std::span<const WeatherInterval> intervals, Instant lo,
                                        Instant hi, WeatherCondition baseline) {
  auto end = std::upper_bound(speeds.begin(), speeds.end(), hi,
                              [](Instant v, const SpeedObservation& s) { return v < s.timestamp; });
  for (auto it = end; it != speeds.begin();) {
    --it;
    if (it->timestamp < lo) break;
    const auto* w = governing(intervals, it->timestamp);
    if (w != nullptr && w->condition == baseline) return &*it;
  }
  return nullptr;
}

struct PendingPair {
  SpeedPair pair;
  Instant t_after;
};

}  // namespace

std::vector<WeatherInterval> propagate_weather(const std::vector<WeatherObservation>& obs,
                                               Seconds period) {
  std::vector<WeatherInterval> out;
  const auto groups = group_by_link(obs, [](const WeatherObservation& o) { return o.timestamp; });
  for (const auto& [id, reports] : groups) {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      // a later report at the same instant wins
      if (i + 1 < reports.size() && reports[i + 1].timestamp == reports[i].timestamp) continue;
      Instant end = reports[i].timestamp + period;
      if (i + 1 < reports.size()) end = std::min(end, reports[i + 1].timestamp);
      out.push_back({id, reports[i].timestamp, end, reports[i].condition});
    }
  }
  return out;
}

std::vector<Transition> detect_transitions(const std::vector<WeatherInterval>& intervals,
                                           WeatherCondition from, WeatherCondition to) {
  std::vector<Transition> out;
  if (from == to) return out;
  const auto groups = group_by_link(intervals, [](const WeatherInterval& w) { return w.start; });
  for (const auto& [id, ws] : groups) {
    for (std::size_t i = 1; i < ws.size(); ++i) {
      const auto& prev = ws[i - 1];
      const auto& cur = ws[i];
      // a gap means the prior condition is unknown
      if (prev.end != cur.start) continue;
      if (prev.condition == from && cur.condition == to) out.push_back({id, cur.start, from, to});
    }
  }
  return out;
}

std::vector<SpeedPair> build_pairs(const std::vector<SpeedObservation>& speeds,
                                   const std::vector<Transition>& transitions,
                                   const std::vector<WeatherInterval>& intervals,
                                   const PairingOptions& options) {
  const auto speeds_by_link =
      group_by_link(speeds, [](const SpeedObservation& s) { return s.timestamp; });
  const auto intervals_by_link =
      group_by_link(intervals, [](const WeatherInterval& w) { return w.start; });

  std::vector<PendingPair> pending;
  for (const auto& tr : transitions) {
    const auto s_it = speeds_by_link.find(tr.link_id);
    const auto w_it = intervals_by_link.find(tr.link_id);
    if (s_it == speeds_by_link.end() || w_it == intervals_by_link.end()) continue;
    const std::span<const SpeedObservation> link_speeds = s_it->second;
    const std::span<const WeatherInterval> link_weather = w_it->second;

    const auto* adverse = governing(link_weather, tr.t0);
    if (adverse == nullptr || adverse->start != tr.t0 || adverse->condition != tr.to_condition) {
      continue;
    }

    auto first_after = std::lower_bound(
        link_speeds.begin(), link_speeds.end(), adverse->start,
        [](const SpeedObservation& s, Instant v) { return s.timestamp < v; });
    auto last_after = std::lower_bound(
        first_after, link_speeds.end(), adverse->end,
        [](const SpeedObservation& s, Instant v) { return s.timestamp < v; });
    if (first_after == last_after) continue;

    const SpeedObservation* before = latest_baseline(link_speeds, link_weather, tr.t0 - options.h,
                                                     tr.t0, tr.from_condition);
    bool borrowed = false;
    if (before == nullptr && options.cross_day) {
      // nearest calendar day first, earlier day on ties
      const auto day0 = day_index(tr.t0);
      const auto reach = std::max(day0 - day_index(link_speeds.front().timestamp),
                                  day_index(link_speeds.back().timestamp) - day0) + 1;
      for (std::int64_t k = 1; k <= reach && before == nullptr; ++k) {
        for (const std::int64_t shift : {-k, k}) {
          const Instant anchor = tr.t0 + shift * kDay;
          before = latest_baseline(link_speeds, link_weather, anchor - options.h, anchor,
                                   tr.from_condition);
          if (before != nullptr) break;
        }
      }
      borrowed = before != nullptr;
    }
    if (before == nullptr) continue;

    for (auto it = first_after; it != last_after; ++it) {
      pending.push_back({SpeedPair{tr.link_id, before->speed_kmh, it->speed_kmh, tr.t0,
                                   before->timestamp, borrowed},
                         it->timestamp});
    }
  }

  std::stable_sort(pending.begin(), pending.end(), [](const PendingPair& a, const PendingPair& b) {
    return std::tie(a.pair.link_id, a.pair.t0, a.t_after) <
           std::tie(b.pair.link_id, b.pair.t0, b.t_after);
  });
  std::vector<SpeedPair> out;
  out.reserve(pending.size());
  for (auto& p : pending) out.push_back(std::move(p.pair));
  return out;
}

}  // namespace wxspeed
