// Independent reference computations used by unit and acceptance tests.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "wxspeed/core.hpp"

namespace wxspeed::oracle {

struct Line {
  double slope{};
  double intercept{};
};

/// Closed-form simple linear regression.
inline Line ols(const std::vector<SpeedPair>& pairs) {
  const double n = static_cast<double>(pairs.size());
  double sx = 0, sy = 0;
  for (const auto& p : pairs) {
    sx += p.v_before;
    sy += p.v_after;
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (const auto& p : pairs) {
    sxy += (p.v_before - mx) * (p.v_after - my);
    sxx += (p.v_before - mx) * (p.v_before - mx);
  }
  const double b = sxy / sxx;
  return {b, my - b * mx};
}

/// Continuous two-piece fit with a hinge at `knot`, via 3x3 normal equations and Cramer's rule.
struct HingeFit {
  double c0{}, c1{}, c2{};
  double rss{};
};

inline HingeFit hinge_fit(const std::vector<SpeedPair>& pairs, double knot) {
  double g[3][3] = {};
  double r[3] = {};
  for (const auto& p : pairs) {
    const double b[3] = {1.0, p.v_before, std::max(0.0, p.v_before - knot)};
    for (int i = 0; i < 3; ++i) {
      r[i] += b[i] * p.v_after;
      for (int j = 0; j < 3; ++j) g[i][j] += b[i] * b[j];
    }
  }
  const auto det3 = [](double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det3(g);
  double c[3];
  for (int k = 0; k < 3; ++k) {
    double m[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = j == k ? r[i] : g[i][j];
    c[k] = det3(m) / d;
  }
  HingeFit f{c[0], c[1], c[2], 0.0};
  for (const auto& p : pairs) {
    const double e = p.v_after - (c[0] + c[1] * p.v_before + c[2] * std::max(0.0, p.v_before - knot));
    f.rss += e * e;
  }
  return f;
}

/// Exhaustive threshold objective at critical speed c, written from the model definition.
inline double threshold_objective(const std::vector<SpeedPair>& pairs, double c, double max_slope) {
  double num = 0.0, den = 0.0;
  for (const auto& p : pairs) {
    if (p.v_before >= c) {
      num += (p.v_before - c) * (p.v_after - c);
      den += (p.v_before - c) * (p.v_before - c);
    }
  }
  double slope = den > 0.0 ? num / den : 1.0;
  if (slope < 0.0) slope = 0.0;
  if (slope > max_slope) slope = max_slope;
  double sse = 0.0;
  for (const auto& p : pairs) {
    const double pred = p.v_before < c ? p.v_before : slope * (p.v_before - c) + c;
    sse += (p.v_after - pred) * (p.v_after - pred);
  }
  return sse;
}

inline double brute_force_threshold_min(const std::vector<SpeedPair>& pairs,
                                        const std::vector<double>& grid, double max_slope) {
  double best = std::numeric_limits<double>::infinity();
  for (const double c : grid) best = std::min(best, threshold_objective(pairs, c, max_slope));
  return best;
}

}  // namespace wxspeed::oracle
