#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wxspeed/error.hpp"
#include "wxspeed/mars.hpp"
#include "wxspeed/synth.hpp"

using namespace wxspeed;

namespace {

// identity up to 80 km/h, then 0.6 v + 32 (continuous at 80)
MarsModel planted() { return MarsModel{"P", {0.0, 80.0, kInfinity}, {{1.0, 0.0}, {0.6, 32.0}}}; }

std::vector<SpeedPair> planted_pairs(std::size_t n, double noise, std::uint64_t seed) {
  auto pairs = generate_piecewise_pairs(planted(), n, {40.0, 140.0}, noise, seed);
  pairs.push_back(pairs.back());
  pairs.back().v_before = 80.0;
  pairs.back().v_after = predict_mars(planted(), 80.0);
  return pairs;
}

double rmse(const MarsModel& m, const std::vector<SpeedPair>& pairs) {
  double s = 0.0;
  for (const auto& p : pairs) s += std::pow(predict_mars(m, p.v_before) - p.v_after, 2);
  return std::sqrt(s / static_cast<double>(pairs.size()));
}

}  // namespace

TEST_CASE("predict_mars") {
  const auto id = make_linear_mars("L", 1.0, 0.0);
  CHECK(predict_mars(id, 0.0) == 0.0);
  CHECK(predict_mars(id, 87.5) == 87.5);

  const MarsModel two{"L", {0.0, 100.0, kInfinity}, {{1.0, 0.0}, {0.8, 20.0}}};
  CHECK(predict_mars(two, 120.0) == doctest::Approx(116.0).epsilon(1e-15));
  // knot belongs to the upper segment
  const MarsModel jump{"L", {0.0, 100.0, kInfinity}, {{1.0, 0.0}, {0.5, 10.0}}};
  CHECK(predict_mars(jump, 100.0) == 60.0);
  CHECK(predict_mars(jump, std::nextafter(100.0, 0.0)) == doctest::Approx(100.0));
  // clamped at zero
  CHECK(predict_mars(make_linear_mars("L", 1.0, -50.0), 10.0) == 0.0);
}

TEST_CASE("fit_mars max_terms=1 is ordinary least squares") {
  const auto pairs = generate_threshold_pairs(60.0, 0.3, 300, {20.0, 140.0}, 3.0, 5, "L");
  const auto m = fit_mars(pairs, 1);
  REQUIRE(m.segments.size() == 1);
  const auto ref = oracle::ols(pairs);
  CHECK(std::fabs(m.segments[0].slope - ref.slope) < 1e-9);
  CHECK(std::fabs(m.segments[0].intercept - ref.intercept) < 1e-9);
}

TEST_CASE("fit_mars recovers a planted two-segment model") {
  const auto pairs = planted_pairs(200, 0.0, 3);

  // brute-force knot search over every candidate
  double best_rss = 1e300, best_knot = -1;
  for (const auto& p : pairs) {
    if (p.v_before <= 0.0) continue;
    const auto f = oracle::hinge_fit(pairs, p.v_before);
    if (f.rss < best_rss - 1e-9) {
      best_rss = f.rss;
      best_knot = p.v_before;
    }
  }
  CHECK(best_knot == 80.0);

  const auto fit = fit_mars_detailed(pairs, MarsOptions{2, 10, 3.0});
  REQUIRE(fit.model.knots.size() == 3);
  CHECK(fit.model.knots[1] == best_knot);
  CHECK(std::fabs(fit.model.segments[0].slope - 1.0) < 1e-6);
  CHECK(std::fabs(fit.model.segments[0].intercept) < 1e-6);
  CHECK(std::fabs(fit.model.segments[1].slope - 0.6) < 1e-6);
  CHECK(std::fabs(fit.model.segments[1].intercept - 32.0) < 1e-6);
  CHECK(rmse(fit.model, pairs) < 1e-6);

  // extra budget is pruned back
  const auto roomy = fit_mars(pairs, 5);
  CHECK(roomy.knots.size() == 3);
  CHECK(rmse(roomy, pairs) < 1e-6);
}

TEST_CASE("fit_mars on identity data") {
  std::vector<SpeedPair> pairs;
  for (int i = 0; i < 40; ++i) pairs.push_back({"L", 30.0 + i * 2.5, 30.0 + i * 2.5, {}, {}, false});
  const auto m = fit_mars(pairs, 4);
  CHECK(rmse(m, pairs) < 1e-9);
  CHECK(predict_mars(m, 77.0) == doctest::Approx(77.0));
}

TEST_CASE("fit_mars forward RSS is non-increasing and nested across max_terms") {
  const auto pairs = generate_threshold_pairs(70.0, 0.2, 400, {20.0, 150.0}, 4.0, 17, "L");
  const auto big = fit_mars_detailed(pairs, MarsOptions{6, 10, 3.0});
  for (std::size_t i = 1; i < big.forward_rss.size(); ++i) {
    CHECK(big.forward_rss[i] <= big.forward_rss[i - 1]);
  }
  for (std::size_t terms = 1; terms <= 6; ++terms) {
    const auto f = fit_mars_detailed(pairs, MarsOptions{terms, 10, 3.0});
    const std::size_t steps = f.forward_rss.size();
    REQUIRE(steps <= big.forward_rss.size());
    CHECK(f.forward_rss.back() == big.forward_rss[steps - 1]);
  }
}

TEST_CASE("fit_mars training error never exceeds the linear fit") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto pairs = generate_threshold_pairs(80.0, 0.1, 250, {30.0, 150.0}, 5.0, seed, "L");
    const auto m = fit_mars(pairs, 5);
    const auto line = oracle::ols(pairs);
    double ols_sse = 0.0;
    for (const auto& p : pairs) ols_sse += std::pow(line.slope * p.v_before + line.intercept - p.v_after, 2);
    CHECK(rmse(m, pairs) <= std::sqrt(ols_sse / pairs.size()) + 1e-12);
    for (std::size_t k = 1; k + 1 < m.knots.size(); ++k) {
      // every segment has support
      std::size_t count = 0;
      for (const auto& p : pairs) count += p.v_before >= m.knots[k] && p.v_before < m.knots[k + 1];
      CHECK(count >= 10);
    }
  }
}

TEST_CASE("fit_mars is deterministic") {
  const auto pairs = generate_threshold_pairs(80.0, 0.1, 300, {30.0, 150.0}, 5.0, 99, "L");
  CHECK(fit_mars(pairs, 5) == fit_mars(pairs, 5));
}

TEST_CASE("fit_mars preconditions") {
  const auto pairs = generate_threshold_pairs(80.0, 0.1, 19, {30.0, 150.0}, 5.0, 1, "L");
  try {
    fit_mars(pairs, 3);
    FAIL("expected insufficient data");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientData);
  }
  auto twenty = generate_threshold_pairs(80.0, 0.1, 20, {30.0, 150.0}, 5.0, 1, "L");
  CHECK_NOTHROW(fit_mars(twenty, 3));
  CHECK_THROWS_AS(fit_mars(twenty, 0), Error);
  twenty[3].link_id = "other";
  CHECK_THROWS_AS(fit_mars(twenty, 3), Error);
}
