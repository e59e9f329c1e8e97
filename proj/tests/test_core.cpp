#include <doctest.h>

#include <cmath>
#include <random>

#include "wxspeed/core.hpp"
#include "wxspeed/error.hpp"
#include "wxspeed/timeutil.hpp"

using namespace wxspeed;

TEST_CASE("FrcClass names follow the road-class table") {
  CHECK(FrcClass(0).name() == "Motorway, Freeway, or other Major road");
  CHECK(FrcClass(3).name() == "Secondary road");
  CHECK(FrcClass(8).name() == "Other road");
  CHECK_THROWS_AS(FrcClass(9), Error);
  CHECK_THROWS_AS(FrcClass(-1), Error);
}

TEST_CASE("weather condition names round-trip") {
  for (const auto c : {WeatherCondition::kNone, WeatherCondition::kDrizzle, WeatherCondition::kSoftRain,
                       WeatherCondition::kMediumStrongRain, WeatherCondition::kRainSnowMixed}) {
    CHECK(parse_weather_condition(to_string(c)) == c);
  }
  CHECK_FALSE(parse_weather_condition("HAIL").has_value());
  CHECK_FALSE(parse_weather_condition("none").has_value());
}

TEST_CASE("GlobalModel derives alpha and beta") {
  const auto g = GlobalModel::from_means(0.66, 0.16, 1);
  CHECK(g.beta() == 1.0 - 0.16);
  CHECK(g.alpha() == doctest::Approx(0.7857142857142857).epsilon(1e-15));
  CHECK_THROWS_AS(GlobalModel::from_means(0.5, 1.0, 1), Error);
  CHECK_THROWS_AS(GlobalModel::from_means(0.5, -0.1, 1), Error);

  const auto zero = GlobalModel::from_means(0.0, 0.0, 1);
  CHECK(zero.alpha() == 0.0);
  CHECK(zero.beta() == 1.0);
}

TEST_CASE("GlobalModel: alpha * (1 - theta1) reproduces theta0_norm") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t0(0.0, 2.0);
  std::uniform_real_distribution<double> t1(0.0, 0.999);
  for (int i = 0; i < 10000; ++i) {
    const double a = t0(rng);
    const double b = t1(rng);
    const auto g = GlobalModel::from_means(a, b, 1);
    CHECK(g.beta() == 1.0 - b);
    CHECK(std::fabs(g.alpha() * (1.0 - b) - a) <= 1e-12 * std::max(a, 1e-300));
  }
}

TEST_CASE("model validation") {
  CHECK_NOTHROW(validate(LocalThresholdModel{"L", 85.8, 0.16, 3}));
  CHECK_THROWS_AS(validate(LocalThresholdModel{"L", 85.8, 1.0, 3}), Error);
  CHECK_THROWS_AS(validate(LocalThresholdModel{"L", -1.0, 0.1, 3}), Error);

  CHECK_NOTHROW(validate(make_linear_mars("L", 1.0, 0.0)));
  CHECK_THROWS_AS(validate(MarsModel{"L", {0.0, 100.0, 90.0, kInfinity}, {{1, 0}, {1, 0}, {1, 0}}}),
                  Error);
  CHECK_THROWS_AS(validate(MarsModel{"L", {0.0, 100.0, kInfinity}, {{1, 0}}}), Error);
  CHECK_THROWS_AS(validate(MarsModel{"L", {5.0, kInfinity}, {{1, 0}}}), Error);
}

TEST_CASE("ISO-8601 instants") {
  const auto t = parse_instant("2009-11-01T08:00:00Z");
  REQUIRE(t.has_value());
  CHECK(t->time_since_epoch().count() == 1257062400);
  CHECK(format_instant(*t) == "2009-11-01T08:00:00Z");
  CHECK(clock_seconds(*t) == 8 * 3600);
  CHECK(parse_instant("2010-02-28 23:59:59") == parse_instant("2010-02-28T23:59:59Z"));
  CHECK(parse_instant("2008-02-29T00:00:00Z").has_value());
  CHECK_FALSE(parse_instant("2009-02-29T00:00:00Z").has_value());
  CHECK_FALSE(parse_instant("2009-11-01T24:00:00Z").has_value());
  CHECK_FALSE(parse_instant("yesterday").has_value());
  CHECK_FALSE(parse_instant("2009-11-01T08:00:00+02:00").has_value());

  const Instant before_epoch{Seconds{-1}};
  CHECK(day_index(before_epoch) == -1);
  CHECK(clock_seconds(before_epoch) == 86399);
  CHECK(format_instant(before_epoch) == "1969-12-31T23:59:59Z");
}
