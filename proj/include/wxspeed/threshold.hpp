/**
 * @file threshold.hpp
 * @brief Per-link linear thresholded model: v0 below the critical speed theta0/(1-theta1),
 *        theta1*v0 + theta0 above it.
 *
 * Fitting searches the critical speed c over a knot grid. For a fixed c the model above c is a
 * line through (c, c), so the least-squares slope has a closed form; it is clipped to
 * [0, 1 - kSlopeMargin].
 */
#pragma once

#include <optional>
#include <vector>

#include "wxspeed/core.hpp"

namespace wxspeed {

inline constexpr double kSlopeMargin = 1e-6;

/// theta0 / (1 - theta1). Throws kInvalidModel when theta1 >= 1.
double critical_speed(const LocalThresholdModel& model);

double predict_threshold(const LocalThresholdModel& model, double v0);

/// Outcome of the closed-form slope fit at one candidate critical speed.
struct KnotFit {
  double knot{};
  double theta1{};
  double sse{};
};

/// {0} plus the distinct v_before values, ascending.
std::vector<double> default_knot_grid(const std::vector<SpeedPair>& pairs);

/**
 * @brief Best clipped slope and its residual sum of squares for critical speed `knot`.
 *
 * When no pair lies strictly above the knot the slope is unidentified and 1 - kSlopeMargin is
 * used, which is the weakest correction.
 */
KnotFit fit_at_knot(const std::vector<SpeedPair>& pairs, double knot);

struct ThresholdFit {
  LocalThresholdModel model;
  double knot{};  ///< critical speed of the model
  double sse{};   ///< objective at the returned parameters
};

/**
 * @brief Least-squares fit over the knot grid (default_knot_grid when none is given).
 *
 * Among equal objectives the largest knot wins. Throws kInsufficientData unless there are at
 * least two pairs with distinct v_before, and kInvalidArgument for mixed links or a grid without
 * any finite non-negative knot.
 */
ThresholdFit fit_threshold_detailed(const std::vector<SpeedPair>& pairs,
                                    const std::optional<std::vector<double>>& knot_grid = {});

LocalThresholdModel fit_threshold(const std::vector<SpeedPair>& pairs,
                                  const std::optional<std::vector<double>>& knot_grid = {});

}  // namespace wxspeed
