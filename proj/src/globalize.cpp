#include "wxspeed/globalize.hpp"

#include <algorithm>
#include <cmath>

#include "wxspeed/error.hpp"

namespace wxspeed {

NormalizedParams normalize_params(const LocalThresholdModel& model, const Link& link) {
  if (model.link_id != link.id) {
    throw Error(ErrorCode::kInvalidArgument,
                "model for link '" + model.link_id + "' normalized with link '" + link.id + "'");
  }
  if (!(link.ffs_kmh > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "link '" + link.id + "' has non-positive FFS");
  }
  return {model.theta0 / link.ffs_kmh, model.theta1};
}

GlobalModel aggregate_global(const std::vector<NormalizedParams>& normalized,
                             const std::optional<std::vector<double>>& weights) {
  if (normalized.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot aggregate an empty parameter list");
  }
  if (weights && weights->size() != normalized.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weights and parameters differ in length");
  }
  double w_sum = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (!(normalized[i].theta1 < 1.0)) {
      throw Error(ErrorCode::kInvalidModel, "cannot aggregate a link slope >= 1");
    }
    const double w = weights ? (*weights)[i] : 1.0;
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative aggregation weight");
    w_sum += w;
    t0 += w * normalized[i].theta0_norm;
    t1 += w * normalized[i].theta1;
  }
  if (!(w_sum > 0.0)) throw Error(ErrorCode::kInvalidArgument, "aggregation weights sum to zero");
  return GlobalModel::from_means(t0 / w_sum, t1 / w_sum, normalized.size());
}

double predict_global(const GlobalModel& global, const Link& link, double v0) {
  const double threshold = global.theta0_norm_mean() * link.ffs_kmh / (1.0 - global.theta1_mean());
  if (v0 < threshold) return v0;
  return global.theta1_mean() * v0 + global.theta0_norm_mean() * link.ffs_kmh;
}

double predict_interpretable(const GlobalModel& global, const Link& link, double v0) {
  const double onset = global.alpha() * link.ffs_kmh;
  if (v0 < onset) return v0;
  return v0 - global.beta() * (v0 - onset);
}

Bandwidth silverman_bandwidth(const std::vector<stats::Point2>& points) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  return {stats::silverman_bandwidth(xs), stats::silverman_bandwidth(ys)};
}

stats::DensityGrid param_density(const std::vector<stats::Point2>& points,
                                 const std::optional<Bandwidth>& bandwidth,
                                 const stats::GridSpec& grid) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "density: no points");
  const Bandwidth bw = bandwidth ? *bandwidth : silverman_bandwidth(points);
  return stats::kde2d(points, bw.hx, bw.hy, grid);
}

stats::GridSpec padded_grid(const std::vector<stats::Point2>& points, const Bandwidth& bandwidth,
                            std::size_t nx, std::size_t ny) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "density: no points");
  stats::GridSpec g{nx, ny, points[0].x, points[0].x, points[0].y, points[0].y};
  for (const auto& p : points) {
    g.x_min = std::min(g.x_min, p.x);
    g.x_max = std::max(g.x_max, p.x);
    g.y_min = std::min(g.y_min, p.y);
    g.y_max = std::max(g.y_max, p.y);
  }
  g.x_min -= 3.0 * bandwidth.hx;
  g.x_max += 3.0 * bandwidth.hx;
  g.y_min -= 3.0 * bandwidth.hy;
  g.y_max += 3.0 * bandwidth.hy;
  return g;
}

stats::AnovaResult frc_dependence_test(const std::map<FrcClass, std::vector<double>>& values) {
  std::vector<std::vector<double>> groups;
  groups.reserve(values.size());
  for (const auto& [frc, v] : values) groups.push_back(v);
  return stats::one_way_anova(groups);
}

}  // namespace wxspeed
