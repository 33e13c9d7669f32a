#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icedrift/track.hpp"

namespace icedrift::ingest {

enum class Format {
  /// Whitespace separated `year fractional_day_of_year longitude latitude`.
  RawLocs,
  /// Comma separated `timestamp_iso8601,lat,lon`.
  GenericCsv,
};

/// Which fractional-day value denotes Jan 1 00:00 UTC in RawLocs files.
enum class DayOrigin { One, Zero };

struct ParseOptions {
  Format format = Format::GenericCsv;
  DayOrigin day_origin = DayOrigin::One;
};

/// Parses a whole file. Blank lines, lines starting with `%` or `#`, and a
/// recognized header row are skipped. Any other line that does not parse
/// fails the whole file with MalformedRecord; zero records gives EmptyFile.
std::vector<Fix> parse_locations(std::string_view content, const ParseOptions& options = {});

/// Snaps every fix to the nearest half-hour mark (exactly 15 minutes rounds up).
/// When several fixes land on one mark the one closest in original time wins,
/// the earlier one on a tie. Input must be sorted by time.
std::vector<Fix> round_to_grid(const std::vector<Fix>& fixes);

struct Regularized {
  Track track;
  /// Number of grid instants filled by interpolation.
  std::size_t interpolated = 0;
  /// Time of the last kept fix when a gap longer than 24 h cut the record.
  std::optional<UtcSeconds> truncated_after;
  /// Gridded fixes discarded by that truncation.
  std::size_t dropped = 0;
};

/// Builds a hole-free track from gridded fixes. The first gap longer than
/// 24 h ends the record; shorter gaps are filled linearly in latitude and in
/// longitude along the shortest arc. Throws TooShort below two fixes.
Regularized regularize(const std::vector<Fix>& gridded, const std::string& id);

struct EnsembleWindow {
  UtcSeconds start = 0;
  UtcSeconds end = 0;
  /// Input tracks cut to [start, end], in input order.
  std::vector<Track> slices;

  std::size_t length() const noexcept { return slices.empty() ? 0 : slices.front().size(); }
};

/// Intersects the time spans of all tracks. Throws NoOverlap when the common
/// window holds fewer than two grid instants.
EnsembleWindow align_tracks(const std::vector<Track>& tracks);

}  // namespace icedrift::ingest
