#pragma once

#include <cstdint>
#include <string>

namespace fbnet {

// All timestamps are UTC seconds since the Unix epoch.
using UnixTime = std::int64_t;

// Seconds per Julian year; the divisor used everywhere ages are reported in
// fractional years.
inline constexpr double kSecondsPerYear = 31557600.0;

// Parses strict ISO-8601 UTC, e.g. "2020-03-01T00:00:00Z".
// Throws DataError on malformed input.
UnixTime parse_iso8601(const std::string& s);

// Formats as "YYYY-MM-DDTHH:MM:SSZ" (inverse of parse_iso8601).
std::string format_iso8601(UnixTime t);

inline double years_between(UnixTime from, UnixTime to) {
    return static_cast<double>(to - from) / kSecondsPerYear;
}

}  // namespace fbnet
