/**
 * @file ingest.hpp
 * @brief CSV readers for links, speeds and weather, and the two-step speed filter.
 *
 * Filtering runs aberrant-first then sparse, and the sparse count is taken after aberrant
 * removal. Weather records are never filtered.
 */
#pragma once

#include <istream>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "wxspeed/core.hpp"

namespace wxspeed {

using LinkTable = std::map<LinkId, Link>;

struct FilterReport {
  std::size_t n_input{};
  std::size_t n_aberrant_removed{};
  std::size_t n_links_dropped{};
  std::size_t n_sparse_removed{};  ///< observations that sat on dropped links
  std::size_t n_output{};

  friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

/**
 * @brief Reads `link_id,frc,ffs_kmh,zone`.
 *
 * Columns are located by header name, so extra columns are tolerated. `zone_column` selects the
 * grouping label column; if it is absent from the header every link gets no zone.
 */
std::vector<Link> parse_links(std::istream& source, std::string_view zone_column = "zone");

/// Reads `link_id,timestamp_iso8601,speed_kmh`; result sorted by (link_id, timestamp).
std::vector<SpeedObservation> parse_speed_records(std::istream& source);

/// Reads `link_id,timestamp_iso8601,condition`; result sorted by (link_id, timestamp).
std::vector<WeatherObservation> parse_weather_records(std::istream& source);

LinkTable index_links(const std::vector<Link>& links);

/// Keeps observations with speed <= 1.5 * FFS. Throws kUnknownLink for an unmapped link.
std::pair<std::vector<SpeedObservation>, FilterReport> filter_aberrant(
    const std::vector<SpeedObservation>& obs, const LinkTable& links);

/// Drops every observation on a link that has fewer than `min_count` records.
std::pair<std::vector<SpeedObservation>, FilterReport> filter_sparse_links(
    const std::vector<SpeedObservation>& obs, std::size_t min_count = 100);

/// filter_aberrant followed by filter_sparse_links, with a merged report.
std::pair<std::vector<SpeedObservation>, FilterReport> filter_speeds(
    const std::vector<SpeedObservation>& obs, const LinkTable& links, std::size_t min_count = 100);

}  // namespace wxspeed
