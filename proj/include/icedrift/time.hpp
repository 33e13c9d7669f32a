#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace icedrift {

/// UTC seconds since 1970-01-01T00:00:00Z.
using UtcSeconds = std::int64_t;

inline constexpr UtcSeconds kGridStep = 1800;
inline constexpr UtcSeconds kMaxGap = 86400;

UtcSeconds utc_from_civil(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                          int second = 0);

/// Accepts `YYYY-MM-DDTHH:MM[:SS[.fff]]` with an optional `Z` or `+HH:MM` offset
/// (a space may replace the `T`). Fractional seconds round to the nearest second.
std::optional<UtcSeconds> parse_iso8601(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_iso8601(UtcSeconds t);

}  // namespace icedrift
