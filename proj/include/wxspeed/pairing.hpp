/**
 * @file pairing.hpp
 * @brief Learning-set construction around weather transitions.
 *
 * Weather reports are propagated over a fixed period, transitions from a baseline condition to
 * an adverse one are located, and each adverse-weather speed right after a transition is paired
 * with the latest baseline-weather speed in the window [t0 - h, t0]. When that window is empty on
 * the transition's own day, the same clock-time window on other days may be used instead.
 */
#pragma once

#include <vector>

#include "wxspeed/core.hpp"

namespace wxspeed {

struct WeatherInterval {
  LinkId link_id;
  Instant start;
  Instant end;  ///< exclusive
  WeatherCondition condition{WeatherCondition::kNone};

  friend bool operator==(const WeatherInterval&, const WeatherInterval&) = default;
};

struct Transition {
  LinkId link_id;
  Instant t0;
  WeatherCondition from_condition{WeatherCondition::kNone};
  WeatherCondition to_condition{WeatherCondition::kNone};

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct PairingOptions {
  Seconds h{std::chrono::minutes(5)};
  bool cross_day{true};
};

/**
 * @brief Turns each report at t into [t, t + period).
 *
 * An interval is cut short when the next report on the same link arrives earlier. Reports that
 * share a timestamp collapse to the last one. Input need not be sorted; output is sorted by
 * (link_id, start).
 */
std::vector<WeatherInterval> propagate_weather(const std::vector<WeatherObservation>& obs,
                                               Seconds period = std::chrono::minutes(15));

/// Transitions at interval starts whose contiguous predecessor has `from` and which has `to`.
std::vector<Transition> detect_transitions(const std::vector<WeatherInterval>& intervals,
                                           WeatherCondition from, WeatherCondition to);

/**
 * @brief Pairs adverse-weather speeds after each transition with a baseline-weather speed.
 *
 * Output is sorted by (link_id, t0, time of the adverse speed).
 */
std::vector<SpeedPair> build_pairs(const std::vector<SpeedObservation>& speeds,
                                   const std::vector<Transition>& transitions,
                                   const std::vector<WeatherInterval>& intervals,
                                   const PairingOptions& options = {});

}  // namespace wxspeed
