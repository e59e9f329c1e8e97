#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wxspeed::csv {

struct Row {
  std::size_t line{};  ///< 1-based line number in the source
  std::vector<std::string> fields;
};

/**
 * @brief Comma-separated table with a mandatory header row.
 *
 * No quoting is supported; none of the pipeline's formats need it. Blank lines are skipped and a
 * trailing '\r' is stripped. An input without any line yields an empty table.
 */
struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  [[nodiscard]] bool empty() const noexcept { return header.empty(); }
  /// Index of a header column, or std::nullopt.
  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
  /// Index of a header column; throws ParseError on line 1 if absent.
  [[nodiscard]] std::size_t require(std::string_view name) const;
};

Table read(std::istream& in);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Strict full-field parse; throws ParseError naming `what`.
double parse_double(const std::string& field, std::size_t line, std::string_view what);
long long parse_integer(const std::string& field, std::size_t line, std::string_view what);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace wxspeed::csv
