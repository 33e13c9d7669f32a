#include "icedrift/track.hpp"

#include <cmath>

#include "icedrift/error.hpp"

namespace icedrift {

double normalize_lon(double lon) {
  double l = std::fmod(lon, 360.0);
  if (l > 180.0) l -= 360.0;
  if (l <= -180.0) l += 360.0;
  return l;
}

double lon_delta(double from, double to) {
  // Written without fmod so that lon_delta(b, a) == -lon_delta(a, b) bit for bit
  // away from the +-180 seam.
  double d = normalize_lon(to) - normalize_lon(from);
  if (d > 180.0)
    d -= 360.0;
  else if (d <= -180.0)
    d += 360.0;
  return d;
}

Fix Fix::make(UtcSeconds t, double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon))
    throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  if (lat < -90.0 || lat > 90.0)
    throw Error(ErrorCode::InvalidArgument, "latitude out of range");
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "negative timestamp");
  return Fix{t, lat, normalize_lon(lon)};
}

Track::Track(std::string id, std::vector<Fix> fixes) : id_(std::move(id)), fixes_(std::move(fixes)) {
  if (fixes_.size() < 2)
    throw Error(ErrorCode::TooShort,
                "track '" + id_ + "' has " + std::to_string(fixes_.size()) + " fixes, need 2");
  if (fixes_.front().t % kGridStep != 0 || fixes_.front().t < 0)
    throw Error(ErrorCode::InvalidArgument, "track '" + id_ + "' does not start on a half-hour mark");
  for (std::size_t i = 1; i < fixes_.size(); ++i)
    if (fixes_[i].t != fixes_[i - 1].t + kGridStep)
      throw Error(ErrorCode::InvalidArgument,
                  "track '" + id_ + "' is not on a uniform 1800 s grid at index " +
                      std::to_string(i));
}

Track Track::slice(UtcSeconds from, UtcSeconds to) const {
  if (from < start() || to > end() || from > to || (from - start()) % kGridStep != 0 ||
      (to - start()) % kGridStep != 0)
    throw Error(ErrorCode::InvalidArgument, "slice bounds outside track '" + id_ + "'");
  const auto first = static_cast<std::size_t>((from - start()) / kGridStep);
  const auto last = static_cast<std::size_t>((to - start()) / kGridStep);
  return Track(id_, std::vector<Fix>(fixes_.begin() + first, fixes_.begin() + last + 1));
}

}  // namespace icedrift
