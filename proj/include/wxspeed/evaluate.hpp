/**
 * @file evaluate.hpp
 * @brief Train/test split, link-summed RMSE and model comparison.
 *
 * The network score is the sum of per-link RMSEs, not a pooled RMSE.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wxspeed/core.hpp"
#include "wxspeed/ingest.hpp"

namespace wxspeed {

struct SplitResult {
  std::vector<SpeedPair> train;
  std::vector<SpeedPair> test;
};

/**
 * @brief Deterministic per-link stratified split.
 *
 * Every link keeps at least one training pair, so a single-pair link goes entirely to training.
 * Link quotas are floor(fraction * n_link) topped up by largest remainder until the training
 * size reaches round(fraction * n); ties go to the link that sorts first. Both outputs keep
 * input order.
 */
SplitResult split_pairs(const std::vector<SpeedPair>& pairs, double train_fraction,
                        std::uint64_t seed);

struct Residual {
  double predicted{};
  double observed{};
  LinkId link_id;
};

struct LinkRmse {
  double rmse{};
  std::size_t n_obs{};

  friend bool operator==(const LinkRmse&, const LinkRmse&) = default;
};

struct RmseReport {
  std::map<LinkId, LinkRmse> per_link;
  double total{};  ///< sum of per-link RMSEs, km/h
  std::size_t n_links{};
  std::size_t n_obs{};
};

/// Throws kInvalidArgument on empty input.
RmseReport rmse(const std::vector<Residual>& residuals);

struct Comparison {
  double delta{};      ///< b.total - a.total, km/h
  double delta_pct{};  ///< delta relative to a.total, percent
};

/// Throws kUndefinedPercentage when a.total is 0 and the totals differ.
Comparison compare_models(const RmseReport& a, const RmseReport& b);

using Predictor = std::function<std::optional<double>(const SpeedPair&)>;

/// Scores `predict` on `pairs`; pairs it declines (std::nullopt) are left out.
RmseReport score(const std::vector<SpeedPair>& pairs, const Predictor& predict);

/// Report restricted to the links of each zone; links without a zone fall under "".
std::map<std::string, RmseReport> rmse_by_zone(const RmseReport& report, const LinkTable& links);

}  // namespace wxspeed
