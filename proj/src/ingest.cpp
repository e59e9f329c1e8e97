#include "wxspeed/ingest.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "wxspeed/csv.hpp"
#include "wxspeed/error.hpp"
#include "wxspeed/timeutil.hpp"

namespace wxspeed {

namespace {

constexpr double kAberrantFactor = 1.5;

const std::string& field(const csv::Row& row, std::size_t idx, std::string_view name) {
  if (idx >= row.fields.size()) {
    throw ParseError(row.line, "missing field '" + std::string(name) + "'");
  }
  return row.fields[idx];
}

const std::string& require_link_id(const csv::Row& row, std::size_t idx) {
  const auto& id = field(row, idx, "link_id");
  if (id.empty()) throw ParseError(row.line, "empty link_id");
  return id;
}

Instant require_instant(const csv::Row& row, std::size_t idx) {
  const auto& text = field(row, idx, "timestamp");
  auto t = parse_instant(text);
  if (!t) throw ParseError(row.line, "unparseable timestamp '" + text + "'");
  return *t;
}

template <typename T>
void sort_by_link_time(std::vector<T>& v) {
  std::stable_sort(v.begin(), v.end(), [](const T& a, const T& b) {
    return std::tie(a.link_id, a.timestamp) < std::tie(b.link_id, b.timestamp);
  });
}

}  // namespace

std::vector<Link> parse_links(std::istream& source, std::string_view zone_column) {
  const auto table = csv::read(source);
  std::vector<Link> out;
  if (table.empty()) return out;
  const auto id_col = table.require("link_id");
  const auto frc_col = table.require("frc");
  const auto ffs_col = table.require("ffs_kmh");
  const auto zone_col = table.find(zone_column);

  std::set<LinkId> seen;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    Link link;
    link.id = require_link_id(row, id_col);
    const auto frc = csv::parse_integer(field(row, frc_col, "frc"), row.line, "frc");
    if (frc < FrcClass::kMin || frc > FrcClass::kMax) {
      throw ParseError(row.line, "FRC " + std::to_string(frc) + " outside [0, 8]");
    }
    link.frc = FrcClass(static_cast<int>(frc));
    link.ffs_kmh = csv::parse_double(field(row, ffs_col, "ffs_kmh"), row.line, "ffs_kmh");
    if (!(link.ffs_kmh > 0.0)) throw ParseError(row.line, "ffs_kmh must be positive");
    if (zone_col && *zone_col < row.fields.size() && !row.fields[*zone_col].empty()) {
      link.zone = row.fields[*zone_col];
    }
    if (!seen.insert(link.id).second) {
      throw Error(ErrorCode::kDuplicate,
                  "line " + std::to_string(row.line) + ": duplicate link id '" + link.id + "'");
    }
    out.push_back(std::move(link));
  }
  return out;
}

std::vector<SpeedObservation> parse_speed_records(std::istream& source) {
  const auto table = csv::read(source);
  std::vector<SpeedObservation> out;
  if (table.empty()) return out;
  const auto id_col = table.require("link_id");
  const auto ts_col = table.require("timestamp_iso8601");
  const auto v_col = table.require("speed_kmh");
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    SpeedObservation o{require_link_id(row, id_col), require_instant(row, ts_col),
                       csv::parse_double(field(row, v_col, "speed_kmh"), row.line, "speed_kmh")};
    if (o.speed_kmh < 0.0) throw ParseError(row.line, "negative speed");
    out.push_back(std::move(o));
  }
  sort_by_link_time(out);
  return out;
}

std::vector<WeatherObservation> parse_weather_records(std::istream& source) {
  const auto table = csv::read(source);
  std::vector<WeatherObservation> out;
  if (table.empty()) return out;
  const auto id_col = table.require("link_id");
  const auto ts_col = table.require("timestamp_iso8601");
  const auto c_col = table.require("condition");
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const auto& text = field(row, c_col, "condition");
    const auto cond = parse_weather_condition(text);
    if (!cond) throw ParseError(row.line, "unknown weather condition '" + text + "'");
    out.push_back({require_link_id(row, id_col), require_instant(row, ts_col), *cond});
  }
  sort_by_link_time(out);
  return out;
}

LinkTable index_links(const std::vector<Link>& links) {
  LinkTable table;
  for (const auto& l : links) {
    if (!table.emplace(l.id, l).second) {
      throw Error(ErrorCode::kDuplicate, "duplicate link id '" + l.id + "'");
    }
  }
  return table;
}

std::pair<std::vector<SpeedObservation>, FilterReport> filter_aberrant(
    const std::vector<SpeedObservation>& obs, const LinkTable& links) {
  FilterReport report;
  report.n_input = obs.size();
  std::vector<SpeedObservation> kept;
  kept.reserve(obs.size());
  for (const auto& o : obs) {
    const auto it = links.find(o.link_id);
    if (it == links.end()) {
      throw Error(ErrorCode::kUnknownLink, "speed observation on unknown link '" + o.link_id + "'");
    }
    // "higher than 150%" removes; exactly 1.5 * FFS stays
    if (o.speed_kmh > kAberrantFactor * it->second.ffs_kmh) {
      ++report.n_aberrant_removed;
    } else {
      kept.push_back(o);
    }
  }
  report.n_output = kept.size();
  return {std::move(kept), report};
}

std::pair<std::vector<SpeedObservation>, FilterReport> filter_sparse_links(
    const std::vector<SpeedObservation>& obs, std::size_t min_count) {
  if (min_count < 1) throw Error(ErrorCode::kInvalidArgument, "min_count must be >= 1");
  std::map<LinkId, std::size_t> counts;
  for (const auto& o : obs) ++counts[o.link_id];

  FilterReport report;
  report.n_input = obs.size();
  for (const auto& [id, n] : counts) {
    if (n < min_count) {
      ++report.n_links_dropped;
      report.n_sparse_removed += n;
    }
  }
  std::vector<SpeedObservation> kept;
  kept.reserve(obs.size() - report.n_sparse_removed);
  for (const auto& o : obs) {
    if (counts[o.link_id] >= min_count) kept.push_back(o);
  }
  report.n_output = kept.size();
  return {std::move(kept), report};
}

std::pair<std::vector<SpeedObservation>, FilterReport> filter_speeds(
    const std::vector<SpeedObservation>& obs, const LinkTable& links, std::size_t min_count) {
  auto [clean, first] = filter_aberrant(obs, links);
  auto [kept, second] = filter_sparse_links(clean, min_count);
  FilterReport report;
  report.n_input = first.n_input;
  report.n_aberrant_removed = first.n_aberrant_removed;
  report.n_links_dropped = second.n_links_dropped;
  report.n_sparse_removed = second.n_sparse_removed;
  report.n_output = second.n_output;
  return {std::move(kept), report};
}

}  // namespace wxspeed
