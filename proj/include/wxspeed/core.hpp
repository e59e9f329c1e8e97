/**
 * @file core.hpp
 * @brief Domain types shared by the whole pipeline: links, observations, pairs and model records.
 *
 * Speeds are km/h everywhere. Instants are UTC with one-second resolution.
 */
#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wxspeed {

using LinkId = std::string;
using Instant = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/**
 * @brief Functional Road Class, 0 (motorway) to 8 (other road).
 */
class FrcClass {
 public:
  static constexpr int kMin = 0;
  static constexpr int kMax = 8;

  /// Throws Error(kInvalidArgument) outside [0, 8].
  explicit FrcClass(int value);

  [[nodiscard]] int value() const noexcept { return value_; }
  /// Full road-class name, e.g. "Motorway, Freeway, or other Major road" for 0.
  [[nodiscard]] std::string_view name() const noexcept;

  friend auto operator<=>(const FrcClass&, const FrcClass&) = default;

 private:
  int value_;
};

/**
 * @brief A road segment, the spatial unit of observation and modeling.
 */
struct Link {
  LinkId id;
  FrcClass frc{0};
  double ffs_kmh{};  ///< free-flow speed, > 0
  std::optional<std::string> zone;

  friend bool operator==(const Link&, const Link&) = default;
};

enum class WeatherCondition : std::uint8_t {
  kNone,
  kDrizzle,
  kSoftRain,
  kMediumStrongRain,
  kRainSnowMixed,
};

/// Upper-case wire name: NONE, DRIZZLE, SOFT_RAIN, MEDIUM_STRONG_RAIN, RAIN_SNOW_MIXED.
std::string_view to_string(WeatherCondition c) noexcept;
/// Inverse of to_string; std::nullopt for anything else.
std::optional<WeatherCondition> parse_weather_condition(std::string_view s) noexcept;

struct SpeedObservation {
  LinkId link_id;
  Instant timestamp;
  double speed_kmh{};

  friend bool operator==(const SpeedObservation&, const SpeedObservation&) = default;
};

struct WeatherObservation {
  LinkId link_id;
  Instant timestamp;
  WeatherCondition condition{WeatherCondition::kNone};

  friend bool operator==(const WeatherObservation&, const WeatherObservation&) = default;
};

/**
 * @brief One learning-set atom: a baseline-weather speed and an adverse-weather speed on one link.
 *
 * t_star is when v_before was observed; t0 is the weather transition instant. When cross_day is
 * set, t_star was borrowed from another calendar day at the same clock-time window.
 */
struct SpeedPair {
  LinkId link_id;
  double v_before{};
  double v_after{};
  Instant t0;
  Instant t_star;
  bool cross_day{false};

  friend bool operator==(const SpeedPair&, const SpeedPair&) = default;
};

/**
 * @brief Per-link linear thresholded correction: identity below theta0/(1-theta1), affine above.
 */
struct LocalThresholdModel {
  LinkId link_id;
  double theta0{};  ///< km/h, >= 0
  double theta1{};  ///< [0, 1)
  std::size_t n_pairs{};

  friend bool operator==(const LocalThresholdModel&, const LocalThresholdModel&) = default;
};

/// Throws Error(kInvalidModel) unless theta0 >= 0 and 0 <= theta1 < 1.
void validate(const LocalThresholdModel& model);

/**
 * @brief Per-link piecewise-linear model in segment form.
 *
 * knots = {0, k_2, ..., +inf} strictly ascending; segments[k] = {slope, intercept} applies on
 * the half-open interval [knots[k], knots[k+1]).
 */
struct MarsModel {
  struct Segment {
    double slope{};
    double intercept{};
    friend bool operator==(const Segment&, const Segment&) = default;
  };

  LinkId link_id;
  std::vector<double> knots;
  std::vector<Segment> segments;

  friend bool operator==(const MarsModel&, const MarsModel&) = default;
};

/// Throws Error(kInvalidModel) on a malformed knot/segment layout.
void validate(const MarsModel& model);

/// Single-segment model v -> slope*v + intercept.
MarsModel make_linear_mars(LinkId link_id, double slope, double intercept);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/**
 * @brief Network-wide correction parameters, normalized by free-flow speed.
 *
 * alpha and beta are derived: alpha = theta0_norm_mean / (1 - theta1_mean), beta = 1 - theta1_mean.
 */
class GlobalModel {
 public:
  /// Throws Error(kInvalidModel) unless 0 <= theta1_mean < 1 and theta0_norm_mean >= 0.
  static GlobalModel from_means(double theta0_norm_mean, double theta1_mean, std::size_t n_links);

  [[nodiscard]] double theta0_norm_mean() const noexcept { return theta0_norm_mean_; }
  [[nodiscard]] double theta1_mean() const noexcept { return theta1_mean_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] std::size_t n_links() const noexcept { return n_links_; }

  friend bool operator==(const GlobalModel&, const GlobalModel&) = default;

 private:
  GlobalModel() = default;

  double theta0_norm_mean_{};
  double theta1_mean_{};
  double alpha_{};
  double beta_{1.0};
  std::size_t n_links_{};
};

}  // namespace wxspeed
