#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "wxspeed/core.hpp"

namespace wxspeed {

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (a trailing "Z" or "+00:00" is accepted, as is a space separator).
std::optional<Instant> parse_instant(std::string_view text) noexcept;

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_instant(Instant t);

/// Whole UTC days since 1970-01-01 (floor division).
std::int64_t day_index(Instant t) noexcept;

/// Seconds since the start of the UTC day, in [0, 86400).
std::int64_t clock_seconds(Instant t) noexcept;

}  // namespace wxspeed
