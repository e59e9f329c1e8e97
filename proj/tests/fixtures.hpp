// Shared test fixtures.
#pragma once

#include <string>

namespace wxspeed::fixtures {

// Three days (2009-11-02..04), links A and B, weather every 15 minutes with a few irregular
// reports. Hand-enumerated NONE -> SOFT_RAIN pairs with h = 5 min:
//   A  t0 D1 10:15  t* D1 10:12  112 -> 98, 97   same day
//   A  t0 D2 11:00  t* D1 10:57  108 -> 99, 100  borrowed (D1 and D3 tie, earlier wins)
//   A  t0 D3 09:30  no baseline on any day
//   A  D3 11:30 follows DRIZZLE and D3 12:15 follows a gap: no transition
//   B  t0 D1 09:30  only a DRIZZLE speed in the window, borrowed from D2 09:28: 104 -> 93
inline const std::string kThreeDayLinks =
    "link_id,frc,ffs_kmh,zone\n"
    "A,0,130,south\n"
    "B,1,110,north\n";

inline std::string three_day_weather() {
  std::string w = "link_id,timestamp_iso8601,condition\n";
  const auto add = [&](const std::string& link, const std::string& day, const std::string& hm,
                       const std::string& cond) {
    w += link + ",2009-11-" + day + "T" + hm + ":00Z," + cond + "\n";
  };
  const char* quarters[] = {"09:00", "09:15", "09:30", "09:45", "10:00", "10:15", "10:30",
                            "10:45", "11:00", "11:15", "11:30", "11:45", "12:00"};
  for (const char* q : quarters) {
    const std::string hm = q;
    add("A", "02", hm, hm == "10:15" || hm == "10:30" ? "SOFT_RAIN" : "NONE");
    add("A", "03", hm, hm == "11:00" ? "SOFT_RAIN" : "NONE");
    if (hm == "12:00") continue;  // gap on day 3
    std::string c = "NONE";
    if (hm == "09:30" || hm == "11:30") c = "SOFT_RAIN";
    if (hm == "11:15") c = "DRIZZLE";
    add("A", "04", hm, c);
  }
  add("A", "04", "12:15", "SOFT_RAIN");

  add("B", "02", "09:15", "NONE");
  add("B", "02", "09:20", "DRIZZLE");
  add("B", "02", "09:27", "NONE");
  add("B", "02", "09:30", "SOFT_RAIN");
  add("B", "03", "09:15", "NONE");
  add("B", "03", "09:30", "NONE");
  return w;
}

inline const std::string kThreeDaySpeeds =
    "link_id,timestamp_iso8601,speed_kmh\n"
    "A,2009-11-02T10:12:00Z,112\n"
    "A,2009-11-02T10:16:00Z,98\n"
    "A,2009-11-02T10:20:00Z,97\n"
    "A,2009-11-02T10:31:00Z,95\n"
    "A,2009-11-02T10:57:00Z,108\n"
    "A,2009-11-03T10:40:00Z,105\n"
    "A,2009-11-03T11:05:00Z,99\n"
    "A,2009-11-03T11:10:00Z,100\n"
    "A,2009-11-04T09:35:00Z,90\n"
    "A,2009-11-04T10:58:00Z,111\n"
    "A,2009-11-04T11:28:00Z,110\n"
    "A,2009-11-04T11:33:00Z,100\n"
    "A,2009-11-04T11:58:00Z,115\n"
    "A,2009-11-04T12:16:00Z,95\n"
    "B,2009-11-02T09:26:00Z,120\n"
    "B,2009-11-02T09:31:00Z,93\n"
    "B,2009-11-03T09:28:00Z,104\n";

inline constexpr std::size_t kThreeDayPairsCrossDay = 5;
inline constexpr std::size_t kThreeDayPairsSameDay = 2;

}  // namespace wxspeed::fixtures
