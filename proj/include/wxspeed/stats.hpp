/**
 * @file stats.hpp
 * @brief Small statistics toolkit: incomplete beta, F tail, one-way ANOVA, 2-D KDE, quantiles.
 */
#pragma once

#include <span>
#include <vector>

namespace wxspeed::stats {

/// I_x(a, b) by Lentz's continued fraction. Requires a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(F > f) for an F(d1, d2) variable.
double f_survival(double f, double d1, double d2);

struct AnovaResult {
  double f{};
  double p{};
  double df_between{};
  double df_within{};
  double ss_between{};
  double ss_within{};
};

/**
 * @brief One-way ANOVA across groups.
 *
 * Needs at least two groups of at least two values each. Zero pooled within-group variance
 * throws kDegenerateVariance.
 */
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

struct GridSpec {
  std::size_t nx{64};
  std::size_t ny{64};
  double x_min{};
  double x_max{};
  double y_min{};
  double y_max{};

  /// Cell-centre coordinates.
  [[nodiscard]] double x(std::size_t i) const;
  [[nodiscard]] double y(std::size_t j) const;
  [[nodiscard]] double cell_area() const;
};

struct DensityGrid {
  GridSpec grid;
  std::vector<double> values;  ///< row-major: values[j * nx + i] at (x(i), y(j))

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[j * grid.nx + i]; }
};

struct Point2 {
  double x{};
  double y{};
};

/// Gaussian product-kernel density on the cell centres of `grid`.
DensityGrid kde2d(std::span<const Point2> points, double hx, double hy, const GridSpec& grid);

/// Two-dimensional Silverman rule for one axis: sd * n^(-1/6). Zero for a constant axis.
double silverman_bandwidth(std::span<const double> values);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> values);
/// Linear-interpolation quantile (Hyndman-Fan type 7). `values` need not be sorted.
double quantile(std::vector<double> values, double q);

}  // namespace wxspeed::stats
