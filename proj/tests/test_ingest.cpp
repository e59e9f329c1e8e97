#include <doctest.h>

#include <functional>
#include <map>
#include <sstream>

#include "wxspeed/error.hpp"
#include "wxspeed/ingest.hpp"
#include "wxspeed/timeutil.hpp"

using namespace wxspeed;

namespace {

std::vector<Link> links_from(const std::string& body, std::string_view zone_column = "zone") {
  std::istringstream in("link_id,frc,ffs_kmh,zone\n" + body);
  return parse_links(in, zone_column);
}

SpeedObservation obs(const std::string& link, std::int64_t t, double v) {
  return {link, Instant{Seconds{t}}, v};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("parse_links maps fields") {
  const auto links = links_from("L1,0,130,south\nL2,2,90,\n");
  REQUIRE(links.size() == 2);
  CHECK(links[0].id == "L1");
  CHECK(links[0].frc.value() == 0);
  CHECK(links[0].ffs_kmh == 130.0);
  CHECK(links[0].zone == std::optional<std::string>("south"));
  CHECK_FALSE(links[1].zone.has_value());
}

TEST_CASE("parse_links rejects bad rows with their line number") {
  try {
    links_from("L1,0,130,south\nL2,9,100,\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK(code_of([] { links_from("L3,2,0,\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { links_from("L3,2,abc,\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { links_from("L1,0,130,\nL1,1,90,\n"); }) == ErrorCode::kDuplicate);
  std::istringstream no_header_cols("id,frc\nL1,0\n");
  CHECK_THROWS_AS(parse_links(no_header_cols), ParseError);
}

TEST_CASE("parse_links zone column is configurable") {
  std::istringstream in("link_id,frc,ffs_kmh,zone,climate\nL1,0,130,south,oceanic\n");
  const auto links = parse_links(in, "climate");
  CHECK(links[0].zone == std::optional<std::string>("oceanic"));
}

TEST_CASE("parse_speed_records") {
  std::istringstream in(
      "link_id,timestamp_iso8601,speed_kmh\n"
      "L1,2009-11-01T08:05:00Z,90\n"
      "L1,2009-11-01T08:00:00Z,95.0\n"
      "L0,2009-11-01T09:00:00Z,50\n");
  const auto s = parse_speed_records(in);
  REQUIRE(s.size() == 3);
  CHECK(s[0].link_id == "L0");
  CHECK(s[1].speed_kmh == 95.0);
  CHECK(format_instant(s[1].timestamp) == "2009-11-01T08:00:00Z");
  CHECK(s[2].speed_kmh == 90.0);

  std::istringstream neg("link_id,timestamp_iso8601,speed_kmh\nL1,2009-11-01T08:00:00Z,-5\n");
  CHECK_THROWS_AS(parse_speed_records(neg), ParseError);
  std::istringstream bad_t("link_id,timestamp_iso8601,speed_kmh\nL1,2009-13-01T08:00:00Z,5\n");
  CHECK_THROWS_AS(parse_speed_records(bad_t), ParseError);
}

TEST_CASE("parse_weather_records") {
  std::istringstream in(
      "link_id,timestamp_iso8601,condition\n"
      "L1,2009-11-01T08:15:00Z,SOFT_RAIN\n"
      "L1,2009-11-01T08:00:00Z,NONE\n");
  const auto w = parse_weather_records(in);
  REQUIRE(w.size() == 2);
  CHECK(w[0].condition == WeatherCondition::kNone);
  CHECK(w[1].condition == WeatherCondition::kSoftRain);

  std::istringstream hail("link_id,timestamp_iso8601,condition\nL1,2009-11-01T08:15:00Z,HAIL\n");
  CHECK_THROWS_AS(parse_weather_records(hail), ParseError);
  std::istringstream empty("");
  CHECK(parse_weather_records(empty).empty());
}

TEST_CASE("filter_aberrant keeps exactly 1.5 * FFS") {
  const auto links = index_links({Link{"A", FrcClass(0), 100.0, {}}, Link{"B", FrcClass(1), 130.0, {}}});
  const std::vector<SpeedObservation> in{obs("A", 0, 151), obs("A", 1, 150), obs("B", 2, 95)};
  const auto [kept, report] = filter_aberrant(in, links);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].speed_kmh == 150.0);
  CHECK(kept[1].speed_kmh == 95.0);
  CHECK(report.n_aberrant_removed == 1);
  CHECK(report.n_output == 2);
  CHECK(code_of([&] { filter_aberrant({obs("Z", 0, 1)}, links); }) == ErrorCode::kUnknownLink);
}

TEST_CASE("filter_aberrant is idempotent") {
  const auto links = index_links({Link{"A", FrcClass(0), 80.0, {}}});
  std::vector<SpeedObservation> in;
  for (int i = 0; i < 300; ++i) in.push_back(obs("A", i, i * 0.7));
  const auto once = filter_aberrant(in, links).first;
  const auto twice = filter_aberrant(once, links).first;
  CHECK(once == twice);
}

TEST_CASE("filter_sparse_links boundary and reconciliation") {
  std::vector<SpeedObservation> in;
  for (int i = 0; i < 99; ++i) in.push_back(obs("short", i, 50));
  for (int i = 0; i < 100; ++i) in.push_back(obs("exact", i, 50));
  for (int i = 0; i < 150; ++i) in.push_back(obs("long", i, 50));
  const auto [kept, report] = filter_sparse_links(in, 100);
  CHECK(kept.size() == 250);
  CHECK(report.n_links_dropped == 1);
  CHECK(report.n_sparse_removed == 99);
  CHECK(report.n_output == report.n_input - report.n_sparse_removed);

  std::map<LinkId, std::size_t> counts;
  for (const auto& o : kept) ++counts[o.link_id];
  for (const auto& [id, n] : counts) CHECK(n >= 100);

  CHECK(filter_sparse_links(in, 1).first == in);
  CHECK_THROWS_AS(filter_sparse_links(in, 0), Error);
}

TEST_CASE("filter_speeds counts sparse links after aberrant removal") {
  const auto links = index_links({Link{"A", FrcClass(0), 100.0, {}}});
  std::vector<SpeedObservation> in;
  for (int i = 0; i < 100; ++i) in.push_back(obs("A", i, 90));
  in.push_back(obs("A", 200, 200));  // aberrant
  auto [kept, report] = filter_speeds(in, links, 100);
  CHECK(kept.size() == 100);
  CHECK(report.n_aberrant_removed == 1);
  CHECK(report.n_output == report.n_input - report.n_aberrant_removed - report.n_sparse_removed);

  in.erase(in.begin());  // 99 clean + 1 aberrant: dropped after aberrant removal
  auto [kept2, report2] = filter_speeds(in, links, 100);
  CHECK(kept2.empty());
  CHECK(report2.n_links_dropped == 1);
  CHECK(report2.n_sparse_removed == 99);
}
