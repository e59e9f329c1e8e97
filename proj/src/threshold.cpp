#include "wxspeed/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "wxspeed/error.hpp"

namespace wxspeed {

double critical_speed(const LocalThresholdModel& model) {
  if (!(model.theta1 < 1.0)) {
    throw Error(ErrorCode::kInvalidModel,
                "threshold model for link '" + model.link_id + "': theta1 must be < 1");
  }
  return model.theta0 / (1.0 - model.theta1);
}

double predict_threshold(const LocalThresholdModel& model, double v0) {
  validate(model);
  if (v0 < critical_speed(model)) return v0;
  return model.theta1 * v0 + model.theta0;
}

std::vector<double> default_knot_grid(const std::vector<SpeedPair>& pairs) {
  std::vector<double> grid{0.0};
  for (const auto& p : pairs) grid.push_back(p.v_before);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

KnotFit fit_at_knot(const std::vector<SpeedPair>& pairs, double knot) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : pairs) {
    if (p.v_before >= knot) {
      num += (p.v_before - knot) * (p.v_after - knot);
      den += (p.v_before - knot) * (p.v_before - knot);
    }
  }
  double slope = den > 0.0 ? num / den : 1.0;
  slope = std::clamp(slope, 0.0, 1.0 - kSlopeMargin);

  double sse = 0.0;
  for (const auto& p : pairs) {
    const double predicted = p.v_before < knot ? p.v_before : slope * (p.v_before - knot) + knot;
    sse += (p.v_after - predicted) * (p.v_after - predicted);
  }
  return {knot, slope, sse};
}

ThresholdFit fit_threshold_detailed(const std::vector<SpeedPair>& pairs,
                                    const std::optional<std::vector<double>>& knot_grid) {
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "threshold fit needs at least 2 pairs, got " +
                                                  std::to_string(pairs.size()));
  }
  const LinkId& link_id = pairs.front().link_id;
  bool distinct = false;
  for (const auto& p : pairs) {
    if (p.link_id != link_id) {
      throw Error(ErrorCode::kInvalidArgument, "threshold fit expects pairs from a single link");
    }
    distinct = distinct || p.v_before != pairs.front().v_before;
  }
  if (!distinct) {
    throw Error(ErrorCode::kInsufficientData,
                "threshold fit needs at least 2 distinct v_before values on link '" + link_id + "'");
  }

  const std::vector<double> grid = knot_grid ? *knot_grid : default_knot_grid(pairs);
  bool found = false;
  KnotFit best;
  for (const double c : grid) {
    if (!std::isfinite(c) || c < 0.0) continue;
    const KnotFit f = fit_at_knot(pairs, c);
    // ties go to the larger knot
    if (!found || f.sse < best.sse || (f.sse == best.sse && f.knot > best.knot)) {
      best = f;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kInvalidArgument, "knot grid has no finite non-negative knot");
  }

  ThresholdFit out;
  out.model = LocalThresholdModel{link_id, best.knot * (1.0 - best.theta1), best.theta1,
                                  pairs.size()};
  out.knot = best.knot;
  out.sse = best.sse;
  return out;
}

LocalThresholdModel fit_threshold(const std::vector<SpeedPair>& pairs,
                                  const std::optional<std::vector<double>>& knot_grid) {
  return fit_threshold_detailed(pairs, knot_grid).model;
}

}  // namespace wxspeed
