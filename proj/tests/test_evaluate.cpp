#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "wxspeed/error.hpp"
#include "wxspeed/evaluate.hpp"

using namespace wxspeed;

namespace {

std::vector<SpeedPair> pairs_on(const std::map<std::string, int>& counts) {
  std::vector<SpeedPair> out;
  int k = 0;
  for (const auto& [id, n] : counts) {
    for (int i = 0; i < n; ++i, ++k) {
      out.push_back({id, 100.0 + k, 90.0 + k, Instant{Seconds{1257120000 + 900 * k}},
                     Instant{Seconds{1257120000 + 900 * k - 60}}, false});
    }
  }
  return out;
}

std::map<std::string, int> per_link(const std::vector<SpeedPair>& pairs) {
  std::map<std::string, int> m;
  for (const auto& p : pairs) ++m[p.link_id];
  return m;
}

}  // namespace

TEST_CASE("split_pairs sizes") {
  const auto ten = pairs_on({{"L", 10}});
  const auto s = split_pairs(ten, 0.9, 1);
  CHECK(s.train.size() == 9);
  CHECK(s.test.size() == 1);

  const auto single = split_pairs(pairs_on({{"L", 1}, {"M", 10}}), 0.9, 1);
  CHECK(per_link(single.train)["L"] == 1);
  CHECK(per_link(single.test).count("L") == 0);

  const auto mixed = pairs_on({{"A", 7}, {"B", 13}, {"C", 2}, {"D", 31}});
  const auto m = split_pairs(mixed, 0.9, 42);
  CHECK(m.train.size() == static_cast<std::size_t>(std::llround(0.9 * mixed.size())));
  CHECK(m.train.size() + m.test.size() == mixed.size());
  for (const auto& [id, n] : per_link(mixed)) {
    CHECK(per_link(m.train)[id] >= 1);
  }
}

TEST_CASE("split_pairs is a deterministic partition") {
  const auto all = pairs_on({{"A", 20}, {"B", 33}});
  const auto a = split_pairs(all, 0.8, 9);
  const auto b = split_pairs(all, 0.8, 9);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);

  std::vector<double> seen;
  for (const auto& p : a.train) seen.push_back(p.v_before);
  for (const auto& p : a.test) seen.push_back(p.v_before);
  std::sort(seen.begin(), seen.end());
  std::vector<double> expected;
  for (const auto& p : all) expected.push_back(p.v_before);
  CHECK(seen == expected);

  const auto other = split_pairs(all, 0.8, 10);
  CHECK((other.test != a.test));
}

TEST_CASE("split_pairs errors") {
  CHECK_THROWS_AS(split_pairs({}, 0.9, 0), Error);
  CHECK_THROWS_AS(split_pairs(pairs_on({{"L", 3}}), 0.0, 0), Error);
  CHECK_THROWS_AS(split_pairs(pairs_on({{"L", 3}}), 1.0, 0), Error);
}

TEST_CASE("rmse sums per-link roots") {
  const auto exact = rmse({{10, 10, "A"}, {20, 20, "B"}});
  CHECK(exact.total == 0.0);

  const auto two = rmse({{3, 0, "A"}, {0, 4, "B"}});
  CHECK(two.per_link.at("A").rmse == 3.0);
  CHECK(two.per_link.at("B").rmse == 4.0);
  CHECK(two.total == 7.0);
  CHECK(two.n_links == 2);
  CHECK(two.n_obs == 2);

  const auto one = rmse({{3, 0, "A"}, {4, 0, "A"}});
  CHECK(one.total == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
  CHECK(one.per_link.at("A").n_obs == 2);
}

TEST_CASE("rmse ignores residual order") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 150.0);
  std::vector<Residual> r;
  for (int i = 0; i < 300; ++i) r.push_back({u(rng), u(rng), std::string(1, static_cast<char>('a' + i % 7))});
  const auto a = rmse(r);
  std::shuffle(r.begin(), r.end(), rng);
  const auto b = rmse(r);
  CHECK(a.total == doctest::Approx(b.total).epsilon(1e-13));
  for (const auto& [id, v] : a.per_link) CHECK(v.rmse == doctest::Approx(b.per_link.at(id).rmse).epsilon(1e-13));
}

TEST_CASE("compare_models") {
  RmseReport a, b, c;
  a.total = 10359.8;
  b.total = 11795.27;
  c.total = 12511.37;
  const auto ab = compare_models(a, b);
  CHECK(ab.delta == doctest::Approx(1435.47).epsilon(1e-12));
  CHECK(std::fabs(ab.delta_pct - 13.86) < 0.005);
  const auto bc = compare_models(b, c);
  CHECK(std::fabs(bc.delta_pct - 6.07) < 0.01);

  const auto same = compare_models(a, a);
  CHECK(same.delta == 0.0);
  CHECK(same.delta_pct == 0.0);

  CHECK(compare_models(b, a).delta == -ab.delta);

  RmseReport zero;
  CHECK(compare_models(zero, zero).delta_pct == 0.0);
  try {
    compare_models(zero, a);
    FAIL("expected undefined percentage");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUndefinedPercentage);
  }
}

TEST_CASE("score and rmse_by_zone") {
  const auto pairs = pairs_on({{"A", 3}, {"B", 2}, {"C", 1}});
  const auto report = score(pairs, [](const SpeedPair& p) -> std::optional<double> {
    if (p.link_id == "C") return std::nullopt;
    return p.v_after + 1.0;
  });
  CHECK(report.n_links == 2);
  CHECK(report.n_obs == 5);
  CHECK(report.total == doctest::Approx(2.0));

  LinkTable links;
  links.emplace("A", Link{"A", FrcClass(0), 130, std::string("south")});
  links.emplace("B", Link{"B", FrcClass(1), 110, std::nullopt});
  const auto zones = rmse_by_zone(report, links);
  CHECK(zones.at("south").total == doctest::Approx(1.0));
  CHECK(zones.at("").per_link.count("B") == 1);

  CHECK_THROWS_AS(score(pairs, [](const SpeedPair&) -> std::optional<double> { return std::nullopt; }), Error);
}
