#include "wxspeed/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wxspeed/error.hpp"

namespace wxspeed::stats {

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double md = m;
    const double m2 = 2.0 * md;
    double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "incomplete beta: need a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // the fraction converges fast on the side of the mean
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_survival(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "F tail: bad dof");
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error(ErrorCode::kInvalidArgument, "ANOVA needs at least 2 groups");
  std::size_t n = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw Error(ErrorCode::kInvalidArgument, "ANOVA needs at least 2 values per group");
    }
    n += g.size();
    for (const double v : g) grand_sum += v;
  }
  const double grand_mean = grand_sum / static_cast<double>(n);
  AnovaResult r;
  for (const auto& g : groups) {
    const double m = mean(g);
    r.ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
    for (const double v : g) r.ss_within += (v - m) * (v - m);
  }
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(n - groups.size());
  const double ms_within = r.ss_within / r.df_within;
  const double scale = std::max(1.0, std::fabs(grand_mean));
  if (!(ms_within > 1e-300) || std::sqrt(ms_within) <= 1e-14 * scale) {
    throw Error(ErrorCode::kDegenerateVariance, "ANOVA: zero within-group variance");
  }
  r.f = (r.ss_between / r.df_between) / ms_within;
  r.p = f_survival(r.f, r.df_between, r.df_within);
  return r;
}

double GridSpec::x(std::size_t i) const {
  return x_min + (static_cast<double>(i) + 0.5) * (x_max - x_min) / static_cast<double>(nx);
}

double GridSpec::y(std::size_t j) const {
  return y_min + (static_cast<double>(j) + 0.5) * (y_max - y_min) / static_cast<double>(ny);
}

double GridSpec::cell_area() const {
  return (x_max - x_min) / static_cast<double>(nx) * (y_max - y_min) / static_cast<double>(ny);
}

DensityGrid kde2d(std::span<const Point2> points, double hx, double hy, const GridSpec& grid) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "density: no points");
  if (!(hx > 0.0) || !(hy > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "density: bandwidths must be positive");
  }
  if (grid.nx == 0 || grid.ny == 0 || !(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min) ||
      !std::isfinite(grid.x_max - grid.x_min) || !std::isfinite(grid.y_max - grid.y_min)) {
    throw Error(ErrorCode::kInvalidArgument, "density: degenerate grid bounds");
  }
  DensityGrid out{grid, std::vector<double>(grid.nx * grid.ny, 0.0)};
  const double norm = 1.0 / (2.0 * std::numbers::pi * hx * hy * static_cast<double>(points.size()));

  // separable kernel: precompute per-axis weights
  std::vector<double> wx(grid.nx * points.size());
  std::vector<double> wy(grid.ny * points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double u = (grid.x(i) - points[p].x) / hx;
      wx[p * grid.nx + i] = std::exp(-0.5 * u * u);
    }
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double u = (grid.y(j) - points[p].y) / hy;
      wy[p * grid.ny + j] = std::exp(-0.5 * u * u);
    }
  }
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      double s = 0.0;
      for (std::size_t p = 0; p < points.size(); ++p) s += wx[p * grid.nx + i] * wy[p * grid.ny + j];
      out.values[j * grid.nx + i] = s * norm;
    }
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "mean of an empty sample");
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double s = 0.0;
  for (const double v : values) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values.size() - 1));
}

double silverman_bandwidth(std::span<const double> values) {
  return stddev(values) * std::pow(static_cast<double>(values.size()), -1.0 / 6.0);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "quantile outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace wxspeed::stats
