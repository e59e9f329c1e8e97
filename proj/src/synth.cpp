#include "wxspeed/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wxspeed/error.hpp"
#include "wxspeed/mars.hpp"
#include "wxspeed/threshold.hpp"
#include "wxspeed/timeutil.hpp"

namespace wxspeed {

namespace {

// 2009-11-01T00:00:00Z
constexpr Instant kSynthEpoch{Seconds{1257033600}};
constexpr Seconds kSpacing{900};
constexpr Seconds kBaselineLead{60};

void check_common(std::size_t n, SpeedRange r, double noise_sd) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "synthetic sample size must be >= 1");
  if (!(r.min < r.max) || r.min < 0.0 || !std::isfinite(r.max)) {
    throw Error(ErrorCode::kInvalidArgument, "speed range must satisfy 0 <= min < max");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorCode::kInvalidArgument, "noise sd must be >= 0");
  }
}

template <typename Mean>
std::vector<SpeedPair> generate(std::size_t n, SpeedRange r, double noise_sd, std::uint64_t seed,
                                const LinkId& link_id, Mean mean) {
  SynthRng rng(seed);
  std::vector<SpeedPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = r.min + (r.max - r.min) * rng.uniform();
    const double noise = rng.normal();
    const Instant t0 = kSynthEpoch + static_cast<std::int64_t>(i) * kSpacing;
    out.push_back({link_id, v, std::max(0.0, mean(v) + noise_sd * noise), t0, t0 - kBaselineLead,
                   false});
  }
  return out;
}

}  // namespace

SynthRng::SynthRng(std::uint64_t seed) : engine_(seed) {}

double SynthRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SynthRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<SpeedPair> generate_threshold_pairs(double theta0, double theta1, std::size_t n,
                                                SpeedRange v_range, double noise_sd,
                                                std::uint64_t seed, const LinkId& link_id) {
  check_common(n, v_range, noise_sd);
  const LocalThresholdModel model{link_id, theta0, theta1, 0};
  validate(model);
  return generate(n, v_range, noise_sd, seed, link_id,
                  [&](double v) { return predict_threshold(model, v); });
}

std::vector<SpeedPair> generate_piecewise_pairs(const MarsModel& model, std::size_t n,
                                                SpeedRange v_range, double noise_sd,
                                                std::uint64_t seed) {
  check_common(n, v_range, noise_sd);
  validate(model);
  return generate(n, v_range, noise_sd, seed, model.link_id.empty() ? LinkId{"SYN"} : model.link_id,
                  [&](double v) { return predict_mars(model, v); });
}

}  // namespace wxspeed
