#include "wxspeed/timeutil.hpp"

#include <charconv>
#include <cstdio>

namespace wxspeed {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Howard Hinnant's days_from_civil / civil_from_days.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) noexcept {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t y;
  unsigned m;
  unsigned d;
};

constexpr Civil civil_from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

constexpr bool is_leap(std::int64_t y) noexcept {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) noexcept {
  constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29u : kDays[m - 1];
}

bool read_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) noexcept {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  const auto* first = s.data() + pos;
  return std::from_chars(first, first + len, out).ec == std::errc{};
}

}  // namespace

std::optional<Instant> parse_instant(std::string_view s) noexcept {
  // 2009-11-01T08:00:00Z
  if (s.size() < 19) return std::nullopt;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_fixed(s, 0, 4, y) || s[4] != '-' || !read_fixed(s, 5, 2, mo) || s[7] != '-' ||
      !read_fixed(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') || !read_fixed(s, 11, 2, h) ||
      s[13] != ':' || !read_fixed(s, 14, 2, mi) || s[16] != ':' || !read_fixed(s, 17, 2, sec)) {
    return std::nullopt;
  }
  const auto rest = s.substr(19);
  if (!(rest.empty() || rest == "Z" || rest == "+00:00")) return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || static_cast<unsigned>(d) > days_in_month(y, mo) || h > 23 ||
      mi > 59 || sec > 59) {
    return std::nullopt;
  }
  const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return Instant{Seconds{days * kSecondsPerDay + h * 3600 + mi * 60 + sec}};
}

std::string format_instant(Instant t) {
  const std::int64_t day = day_index(t);
  const std::int64_t clock = clock_seconds(t);
  const Civil c = civil_from_days(day);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(c.y), c.m, c.d, static_cast<long long>(clock / 3600),
                static_cast<long long>(clock / 60 % 60), static_cast<long long>(clock % 60));
  return buf;
}

std::int64_t day_index(Instant t) noexcept {
  const std::int64_t s = t.time_since_epoch().count();
  return s >= 0 ? s / kSecondsPerDay : -((-s + kSecondsPerDay - 1) / kSecondsPerDay);
}

std::int64_t clock_seconds(Instant t) noexcept {
  return t.time_since_epoch().count() - day_index(t) * kSecondsPerDay;
}

}  // namespace wxspeed
