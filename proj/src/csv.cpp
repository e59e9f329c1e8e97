#include "wxspeed/csv.hpp"

#include <charconv>
#include <cmath>

#include "wxspeed/error.hpp"

namespace wxspeed::csv {

std::optional<std::size_t> Table::find(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ParseError(1, "missing header column '" + std::string(name) + "'");
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return out;
}

Table read(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!have_header) {
      table.header = split(line);
      have_header = true;
      continue;
    }
    table.rows.push_back(Row{line_no, split(line)});
  }
  return table;
}

double parse_double(const std::string& field, std::size_t line, std::string_view what) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = first + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParseError(line, "cannot parse " + std::string(what) + " from '" + field + "'");
  }
  return v;
}

long long parse_integer(const std::string& field, std::size_t line, std::string_view what) {
  long long v = 0;
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), last, v);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(line, "cannot parse " + std::string(what) + " from '" + field + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace wxspeed::csv
