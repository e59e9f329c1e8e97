#include "wxspeed/core.hpp"

#include <array>
#include <cmath>

#include "wxspeed/error.hpp"

namespace wxspeed {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kUnknownLink: return "unknown link";
    case ErrorCode::kInsufficientData: return "insufficient data";
    case ErrorCode::kInvalidModel: return "invalid model";
    case ErrorCode::kDegenerateVariance: return "degenerate variance";
    case ErrorCode::kUndefinedPercentage: return "undefined percentage";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

namespace {

constexpr std::array<std::string_view, 9> kFrcNames = {
    "Motorway, Freeway, or other Major road",
    "Major road less important than a motorway",
    "Other major road",
    "Secondary road",
    "Local connecting road",
    "Local road of high importance",
    "Local road",
    "Local road of minor importance",
    "Other road",
};

constexpr std::array<std::string_view, 5> kConditionNames = {
    "NONE", "DRIZZLE", "SOFT_RAIN", "MEDIUM_STRONG_RAIN", "RAIN_SNOW_MIXED",
};

}  // namespace

FrcClass::FrcClass(int value) : value_(value) {
  if (value < kMin || value > kMax) {
    throw Error(ErrorCode::kInvalidArgument,
                "FRC " + std::to_string(value) + " outside [0, 8]");
  }
}

std::string_view FrcClass::name() const noexcept { return kFrcNames[static_cast<std::size_t>(value_)]; }

std::string_view to_string(WeatherCondition c) noexcept {
  return kConditionNames[static_cast<std::size_t>(c)];
}

std::optional<WeatherCondition> parse_weather_condition(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kConditionNames.size(); ++i) {
    if (kConditionNames[i] == s) return static_cast<WeatherCondition>(i);
  }
  return std::nullopt;
}

void validate(const LocalThresholdModel& model) {
  if (!(model.theta1 >= 0.0 && model.theta1 < 1.0)) {
    throw Error(ErrorCode::kInvalidModel, "threshold model for link '" + model.link_id +
                                              "': theta1 must lie in [0, 1)");
  }
  if (!(model.theta0 >= 0.0) || !std::isfinite(model.theta0)) {
    throw Error(ErrorCode::kInvalidModel,
                "threshold model for link '" + model.link_id + "': theta0 must be >= 0");
  }
}

void validate(const MarsModel& model) {
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kInvalidModel, "MARS model for link '" + model.link_id + "': " + what);
  };
  if (model.knots.size() < 2) fail("needs at least two knots");
  if (model.knots.front() != 0.0) fail("first knot must be 0");
  if (model.knots.back() != kInfinity) fail("last knot must be +inf");
  for (std::size_t k = 1; k < model.knots.size(); ++k) {
    if (!(model.knots[k - 1] < model.knots[k])) fail("knots must be strictly ascending");
  }
  if (model.segments.size() + 1 != model.knots.size()) fail("need exactly one segment per interval");
  for (const auto& s : model.segments) {
    if (!std::isfinite(s.slope) || !std::isfinite(s.intercept)) fail("non-finite coefficient");
  }
}

MarsModel make_linear_mars(LinkId link_id, double slope, double intercept) {
  return MarsModel{std::move(link_id), {0.0, kInfinity}, {{slope, intercept}}};
}

GlobalModel GlobalModel::from_means(double theta0_norm_mean, double theta1_mean,
                                    std::size_t n_links) {
  if (!(theta1_mean >= 0.0 && theta1_mean < 1.0)) {
    throw Error(ErrorCode::kInvalidModel, "global model: mean theta1 must lie in [0, 1)");
  }
  if (!(theta0_norm_mean >= 0.0) || !std::isfinite(theta0_norm_mean)) {
    throw Error(ErrorCode::kInvalidModel, "global model: mean normalized theta0 must be >= 0");
  }
  GlobalModel g;
  g.theta0_norm_mean_ = theta0_norm_mean;
  g.theta1_mean_ = theta1_mean;
  g.beta_ = 1.0 - theta1_mean;
  g.alpha_ = theta0_norm_mean / g.beta_;
  g.n_links_ = n_links;
  return g;
}

}  // namespace wxspeed
