#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "icedrift/time.hpp"

namespace icedrift {

/// Longitude mapped into (-180, 180].
double normalize_lon(double lon);

/// Shortest signed arc from `from` to `to`, in (-180, 180].
double lon_delta(double from, double to);

/// One timestamped GPS position.
struct Fix {
  UtcSeconds t = 0;
  double lat = 0.0;
  double lon = 0.0;

  /// Validates ranges and normalizes the longitude; throws InvalidArgument.
  static Fix make(UtcSeconds t, double lat, double lon);

  friend bool operator==(const Fix&, const Fix&) = default;
};

/// A position series on the uniform 30-minute UTC grid, with no holes.
class Track {
 public:
  /// Throws InvalidArgument unless the fixes sit on consecutive half-hour marks,
  /// and TooShort if there are fewer than two of them.
  Track(std::string id, std::vector<Fix> fixes);

  const std::string& id() const noexcept { return id_; }
  UtcSeconds start() const noexcept { return fixes_.front().t; }
  UtcSeconds end() const noexcept { return fixes_.back().t; }
  UtcSeconds step_s() const noexcept { return kGridStep; }
  std::size_t size() const noexcept { return fixes_.size(); }
  std::span<const Fix> fixes() const noexcept { return fixes_; }
  const Fix& operator[](std::size_t i) const { return fixes_[i]; }

  /// Sub-track covering [from, to]; both ends must lie on this track's grid.
  Track slice(UtcSeconds from, UtcSeconds to) const;

 private:
  std::string id_;
  std::vector<Fix> fixes_;
};

}  // namespace icedrift
