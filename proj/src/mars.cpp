#include "wxspeed/mars.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "wxspeed/error.hpp"

namespace wxspeed {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Data {
  VectorXd x;
  VectorXd y;
  std::vector<double> sorted_x;
};

Data extract(const std::vector<SpeedPair>& pairs) {
  Data d;
  const auto n = static_cast<Eigen::Index>(pairs.size());
  d.x.resize(n);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.x[i] = pairs[static_cast<std::size_t>(i)].v_before;
    d.y[i] = pairs[static_cast<std::size_t>(i)].v_after;
  }
  d.sorted_x.assign(d.x.begin(), d.x.end());
  std::sort(d.sorted_x.begin(), d.sorted_x.end());
  return d;
}

VectorXd hinge(const VectorXd& x, double knot) { return (x.array() - knot).max(0.0).matrix(); }

MatrixXd design(const VectorXd& x, const std::vector<double>& knots) {
  MatrixXd b(x.size(), static_cast<Eigen::Index>(knots.size()) + 2);
  b.col(0).setOnes();
  b.col(1) = x;
  for (std::size_t k = 0; k < knots.size(); ++k) b.col(static_cast<Eigen::Index>(k) + 2) = hinge(x, knots[k]);
  return b;
}

VectorXd solve(const MatrixXd& b, const VectorXd& y) {
  Eigen::ColPivHouseholderQR<MatrixXd> qr(b);
  qr.setThreshold(1e-12);
  return qr.solve(y);
}

double rss_of(const MatrixXd& b, const VectorXd& y) { return (y - b * solve(b, y)).squaredNorm(); }

/// Every interval [a_k, a_{k+1}) defined by `knots` holds at least `min_points` observations.
bool supported(const std::vector<double>& sorted_x, std::vector<double> knots,
               std::size_t min_points) {
  std::sort(knots.begin(), knots.end());
  auto lo = sorted_x.begin();
  for (const double k : knots) {
    auto hi = std::lower_bound(lo, sorted_x.end(), k);
    if (static_cast<std::size_t>(hi - lo) < min_points) return false;
    lo = hi;
  }
  return static_cast<std::size_t>(sorted_x.end() - lo) >= min_points;
}

double gcv(double rss, std::size_t n, std::size_t n_knots, double penalty) {
  const double nd = static_cast<double>(n);
  const double effective = static_cast<double>(n_knots + 2) + penalty * static_cast<double>(n_knots);
  if (effective >= nd) return std::numeric_limits<double>::infinity();
  const double shrink = 1.0 - effective / nd;
  return rss / nd / (shrink * shrink);
}

MarsModel to_segments(const LinkId& link_id, std::vector<double> knots, const VectorXd& coef) {
  // sort knots along with their hinge coefficients
  std::vector<std::pair<double, double>> hinges;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    hinges.emplace_back(knots[k], coef[static_cast<Eigen::Index>(k) + 2]);
  }
  std::sort(hinges.begin(), hinges.end());

  MarsModel model;
  model.link_id = link_id;
  model.knots.push_back(0.0);
  double slope = coef[1];
  double intercept = coef[0];
  model.segments.push_back({slope, intercept});
  for (const auto& [knot, c] : hinges) {
    slope += c;
    intercept -= c * knot;
    model.knots.push_back(knot);
    model.segments.push_back({slope, intercept});
  }
  model.knots.push_back(kInfinity);
  return model;
}

}  // namespace

double predict_mars(const MarsModel& model, double v0) {
  // first knot strictly greater than v0 closes the owning segment
  const auto it = std::upper_bound(model.knots.begin(), model.knots.end(), v0);
  std::size_t k = it == model.knots.begin() ? 0 : static_cast<std::size_t>(it - model.knots.begin()) - 1;
  k = std::min(k, model.segments.size() - 1);
  const auto& s = model.segments[k];
  return std::max(0.0, s.slope * v0 + s.intercept);
}

MarsModel fit_mars(const std::vector<SpeedPair>& pairs, std::size_t max_terms,
                   std::size_t min_segment_points) {
  return fit_mars_detailed(pairs, MarsOptions{max_terms, min_segment_points, 3.0}).model;
}

MarsFitResult fit_mars_detailed(const std::vector<SpeedPair>& pairs, const MarsOptions& options) {
  if (options.max_terms < 1) throw Error(ErrorCode::kInvalidArgument, "max_terms must be >= 1");
  if (options.min_segment_points < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_segment_points must be >= 1");
  }
  if (pairs.size() < 2 * options.min_segment_points || pairs.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "MARS fit needs at least " + std::to_string(2 * options.min_segment_points) +
                    " pairs, got " + std::to_string(pairs.size()));
  }
  const LinkId& link_id = pairs.front().link_id;
  for (const auto& p : pairs) {
    if (p.link_id != link_id) {
      throw Error(ErrorCode::kInvalidArgument, "MARS fit expects pairs from a single link");
    }
  }

  const Data data = extract(pairs);
  const std::size_t n = pairs.size();
  const double tss = (data.y.array() - data.y.mean()).square().sum();
  const double negligible = 1e-12 * std::max(tss, data.y.squaredNorm());

  std::vector<double> candidates;
  for (const double v : data.sorted_x) {
    if (v > 0.0 && (candidates.empty() || candidates.back() != v)) candidates.push_back(v);
  }

  // Forward pass on an orthonormal basis of the current model space.
  MatrixXd q(static_cast<Eigen::Index>(n), 0);
  VectorXd residual = data.y;
  const auto add_column = [&](VectorXd u) -> bool {
    const double raw = u.squaredNorm();
    for (int pass = 0; pass < 2; ++pass) u -= q * (q.transpose() * u);
    const double norm2 = u.squaredNorm();
    if (!(norm2 > 1e-12 * raw) || raw == 0.0) return false;
    u /= std::sqrt(norm2);
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = u;
    residual -= u * u.dot(residual);
    return true;
  };
  add_column(VectorXd::Ones(static_cast<Eigen::Index>(n)));
  add_column(data.x);

  MarsFitResult result;
  std::vector<double> knots;
  result.forward_rss.push_back(residual.squaredNorm());

  while (knots.size() + 1 < options.max_terms) {
    double best_gain = 0.0;
    double best_knot = 0.0;
    bool found = false;
    for (const double t : candidates) {
      if (std::find(knots.begin(), knots.end(), t) != knots.end()) continue;
      auto trial = knots;
      trial.push_back(t);
      if (!supported(data.sorted_x, trial, options.min_segment_points)) continue;
      const VectorXd h = hinge(data.x, t);
      VectorXd u = h - q * (q.transpose() * h);
      u -= q * (q.transpose() * u);
      const double d = u.squaredNorm();
      if (!(d > 1e-12 * h.squaredNorm())) continue;
      const double proj = u.dot(residual);
      const double gain = proj * proj / d;
      // strict improvement keeps the smallest knot on ties
      if (!found || gain > best_gain * (1.0 + 1e-12)) {
        best_gain = gain;
        best_knot = t;
        found = true;
      }
    }
    if (!found || best_gain <= negligible) break;
    if (!add_column(hinge(data.x, best_knot))) break;
    knots.push_back(best_knot);
    result.forward_knots.push_back(best_knot);
    result.forward_rss.push_back(residual.squaredNorm());
  }

  // Backward pruning: drop the least useful knot repeatedly, keep the subset with the best GCV.
  std::vector<double> current = knots;
  std::vector<double> best_knots = current;
  double best_rss = rss_of(design(data.x, current), data.y);
  double best_gcv = gcv(best_rss, n, current.size(), options.gcv_penalty);
  while (!current.empty()) {
    std::size_t drop = 0;
    double drop_rss = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < current.size(); ++k) {
      auto trial = current;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
      const double r = rss_of(design(data.x, trial), data.y);
      if (r < drop_rss) {
        drop_rss = r;
        drop = k;
      }
    }
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
    const double g = gcv(drop_rss, n, current.size(), options.gcv_penalty);
    // smaller models win unless the larger one is clearly better
    if (g <= best_gcv + 1e-12 * std::max(tss / static_cast<double>(n), 1e-300)) {
      best_gcv = g;
      best_knots = current;
    }
  }

  const MatrixXd b = design(data.x, best_knots);
  result.model = to_segments(link_id, best_knots, solve(b, data.y));
  validate(result.model);
  result.gcv = best_gcv;
  double rss = 0.0;
  for (const auto& p : pairs) {
    const double e = predict_mars(result.model, p.v_before) - p.v_after;
    rss += e * e;
  }
  result.rss = rss;
  return result;
}

}  // namespace wxspeed
