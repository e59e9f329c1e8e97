/**
 * @file globalize.hpp
 * @brief From per-link threshold models to one network-wide correction rule.
 *
 * theta0 is divided by the link's free-flow speed, which removes most of its dependence on the
 * road class; the network rule keeps the plain means of (theta0/FFS, theta1). The same rule has
 * an interpretable form: above alpha*FFS a speed loses beta times its excess over alpha*FFS.
 */
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wxspeed/core.hpp"
#include "wxspeed/stats.hpp"

namespace wxspeed {

struct NormalizedParams {
  double theta0_norm{};
  double theta1{};
};

/// (theta0 / ffs, theta1). Throws kInvalidArgument when the model belongs to another link.
NormalizedParams normalize_params(const LocalThresholdModel& model, const Link& link);

/**
 * @brief Means of the normalized parameters.
 *
 * With `weights` (typically pair counts) a weighted mean is used instead of the plain one.
 * Throws kInvalidArgument on an empty list and kInvalidModel when the mean slope is >= 1.
 */
GlobalModel aggregate_global(const std::vector<NormalizedParams>& normalized,
                             const std::optional<std::vector<double>>& weights = {});

/// v0 below theta0_norm_mean * ffs / (1 - theta1_mean), else theta1_mean * v0 + theta0_norm_mean * ffs.
double predict_global(const GlobalModel& global, const Link& link, double v0);

/// v0 - beta * (v0 - alpha * ffs) when v0 >= alpha * ffs, else v0.
double predict_interpretable(const GlobalModel& global, const Link& link, double v0);

struct Bandwidth {
  double hx{};
  double hy{};
};

/**
 * @brief Kernel density of parameter pairs on a grid.
 *
 * Without an explicit bandwidth the two-dimensional Silverman rule is applied per axis; a
 * constant axis then raises kInvalidArgument.
 */
stats::DensityGrid param_density(const std::vector<stats::Point2>& points,
                                 const std::optional<Bandwidth>& bandwidth,
                                 const stats::GridSpec& grid);

/// Grid bounds covering the points plus three bandwidths on each side.
stats::GridSpec padded_grid(const std::vector<stats::Point2>& points, const Bandwidth& bandwidth,
                            std::size_t nx, std::size_t ny);

Bandwidth silverman_bandwidth(const std::vector<stats::Point2>& points);

/// One-way ANOVA of a parameter across road classes.
stats::AnovaResult frc_dependence_test(const std::map<FrcClass, std::vector<double>>& values);

}  // namespace wxspeed
