#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace newsreuse {

/// UTC instant with microsecond resolution.
struct Timestamp {
  std::int64_t micros = 0;  // since 1970-01-01T00:00:00Z

  auto operator<=>(const Timestamp&) const = default;
};

/// Calendar day in UTC, counted from 1970-01-01.
struct CivilDay {
  std::int64_t days = 0;

  auto operator<=>(const CivilDay&) const = default;
};

/// Parses RFC 3339 (`2023-10-07T08:15:00.000001Z`, `...+02:00`) into UTC.
/// Fractional seconds beyond six digits are truncated. Throws BadTimestamp.
Timestamp parse_rfc3339(std::string_view text);

/// Always `YYYY-MM-DDTHH:MM:SS.ffffffZ`.
std::string format_rfc3339(Timestamp ts);

CivilDay utc_day(Timestamp ts);
std::string format_day(CivilDay day);

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d);

}  // namespace newsreuse
