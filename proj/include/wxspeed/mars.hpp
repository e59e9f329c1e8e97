/**
 * @file mars.hpp
 * @brief One-predictor MARS fit of v_after on v_before, returned in segment form.
 *
 * The basis is {1, v} plus one hinge (v - t)+ per selected knot t. Together with the linear term
 * that spans the same space as Friedman's reflected hinge pairs {(v - t)+, (t - v)+}. `max_terms`
 * counts the non-constant basis functions, so it bounds the number of segments: max_terms = 1 is
 * ordinary least squares on (v_before, v_after).
 */
#pragma once

#include <vector>

#include "wxspeed/core.hpp"

namespace wxspeed {

struct MarsOptions {
  std::size_t max_terms{4};
  std::size_t min_segment_points{10};
  double gcv_penalty{3.0};  ///< cost per knot in the GCV effective parameter count
};

struct MarsFitResult {
  MarsModel model;
  std::vector<double> forward_knots;  ///< in order of selection
  std::vector<double> forward_rss;    ///< RSS after the linear fit and after each forward step
  double rss{};                       ///< training RSS of the returned (pruned, clamped) model
  double gcv{};
};

/// slope_k * v0 + intercept_k on the segment with knots[k] <= v0 < knots[k+1], clamped at 0.
double predict_mars(const MarsModel& model, double v0);

/// Throws kInsufficientData with fewer than 2 * min_segment_points pairs.
MarsModel fit_mars(const std::vector<SpeedPair>& pairs, std::size_t max_terms,
                   std::size_t min_segment_points = 10);

MarsFitResult fit_mars_detailed(const std::vector<SpeedPair>& pairs, const MarsOptions& options);

}  // namespace wxspeed
