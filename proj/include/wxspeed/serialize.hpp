/**
 * @file serialize.hpp
 * @brief CSV and JSON encodings of pipeline artifacts.
 *
 * Pairs:   link_id,t0_iso8601,t_star_iso8601,v_before_kmh,v_after_kmh,cross_day
 * Threshold model: {"link_id", "theta0", "theta1", "n_pairs"}
 * MARS model:      {"link_id", "knots", "segments": [[a, b], ...]}; the final +inf knot is "inf"
 * Global model:    {"theta0_norm_mean", "theta1_mean", "alpha", "beta", "n_links"}
 *
 * Doubles are written in shortest round-trip form.
 */
#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "wxspeed/core.hpp"
#include "wxspeed/evaluate.hpp"
#include "wxspeed/ingest.hpp"
#include "wxspeed/stats.hpp"

namespace wxspeed {

using Json = nlohmann::json;

void write_pairs(std::ostream& out, const std::vector<SpeedPair>& pairs);
std::vector<SpeedPair> read_pairs(std::istream& in);

void write_speeds(std::ostream& out, const std::vector<SpeedObservation>& speeds);
void write_links(std::ostream& out, const std::vector<Link>& links);

Json to_json(const LocalThresholdModel& m);
Json to_json(const MarsModel& m);
Json to_json(const GlobalModel& g);
Json to_json(const RmseReport& r);
Json to_json(const FilterReport& r);
Json to_json(const Comparison& c);

/// The from_json family throws kParse on missing or mistyped fields and kInvalidModel on
/// values outside a model's domain.
LocalThresholdModel threshold_model_from_json(const Json& j);
MarsModel mars_model_from_json(const Json& j);
GlobalModel global_model_from_json(const Json& j);

/// Accepts a single model object or an array of them.
std::vector<LocalThresholdModel> threshold_models_from_json(const Json& j);
std::vector<MarsModel> mars_models_from_json(const Json& j);

/// Parses a whole stream as JSON; throws kParse on malformed input.
Json read_json(std::istream& in);

/// `link_id,rmse,n_obs`
void write_per_link_rmse(std::ostream& out, const RmseReport& r);

/// `x,y,density`, one row per grid cell, x fastest.
void write_density(std::ostream& out, const stats::DensityGrid& grid);

}  // namespace wxspeed
