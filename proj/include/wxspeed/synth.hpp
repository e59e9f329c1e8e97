/**
 * @file synth.hpp
 * @brief Seeded synthetic pair generators with planted model parameters.
 *
 * The stream is fixed so any reimplementation reproduces it bit for bit:
 *   - raw bits: std::mt19937_64 seeded with `seed` (its output sequence is fixed by the C++
 *     standard and matches the reference MT19937-64 of Matsumoto and Nishimura);
 *   - uniform on [0, 1): (draw >> 11) * 2^-53;
 *   - normal: Box-Muller cosine branch, sqrt(-2 ln(1 - u1)) * cos(2 pi u2), two uniforms each.
 * Per pair the draws are: one uniform for v_before, then one normal for the noise.
 */
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wxspeed/core.hpp"

namespace wxspeed {

struct SpeedRange {
  double min{};
  double max{};
};

/// The uniform/normal stream described above.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed);
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// v_after = threshold model(v_before) + N(0, noise_sd), clamped at 0.
std::vector<SpeedPair> generate_threshold_pairs(double theta0, double theta1, std::size_t n,
                                                SpeedRange v_range, double noise_sd,
                                                std::uint64_t seed, const LinkId& link_id = "SYN");

/// v_after = predict_mars(model, v_before) + N(0, noise_sd), clamped at 0.
std::vector<SpeedPair> generate_piecewise_pairs(const MarsModel& model, std::size_t n,
                                                SpeedRange v_range, double noise_sd,
                                                std::uint64_t seed);

}  // namespace wxspeed
