#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icedrift/time.hpp"
#include "icedrift/track.hpp"

namespace icedrift::io {

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and renames into place.
void write_file(const std::filesystem::path& path, std::string_view content);

/// GenericCsv: header `timestamp,lat,lon`, ISO-8601 UTC timestamps.
void write_track_csv(std::ostream& out, const Track& track);

/// Single-value series CSV: header `time_utc,<value_name>`.
void write_series_csv(std::ostream& out, std::span<const UtcSeconds> times,
                      std::span<const double> values, std::string_view value_name);

struct Series {
  std::vector<UtcSeconds> times;
  std::vector<double> values;
};

/// Reads a file written by write_series_csv. Throws MalformedRecord / EmptyFile.
Series parse_series_csv(std::string_view content);

}  // namespace icedrift::io
