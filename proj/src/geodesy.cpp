#include "icedrift/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "icedrift/error.hpp"

namespace icedrift::geodesy {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double abs_lon_separation(double lon_a, double lon_b) {
  double d = std::fabs(normalize_lon(lon_a) - normalize_lon(lon_b));
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace

double geodesic_km(const Fix& a, const Fix& b) {
  const double dlat = std::fabs(a.lat - b.lat) * kDeg;
  const double dlon = abs_lon_separation(a.lon, b.lon) * kDeg;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  const double h = s_lat * s_lat + std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * s_lon * s_lon;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

Components zonal_meridional(const Fix& a, const Fix& b) {
  const double lat_mean = (a.lat + b.lat) / 2.0;
  if (std::fabs(lat_mean) > kPoleGuardDeg)
    throw Error(ErrorCode::PoleDegenerate, "mean latitude within 0.001 deg of a pole");
  return Components{
      lon_delta(a.lon, b.lon) * kDeg * kEarthRadiusKm * std::cos(lat_mean * kDeg),
      (b.lat - a.lat) * kDeg * kEarthRadiusKm,
  };
}

Fix offset_by_km(const Fix& from, Components step, UtcSeconds t) {
  const double lat = from.lat + step.meridional_km / (kDeg * kEarthRadiusKm);
  const double lat_mean = (from.lat + lat) / 2.0;
  if (std::fabs(lat_mean) > kPoleGuardDeg || std::fabs(lat) > 90.0)
    throw Error(ErrorCode::PoleDegenerate, "step crosses the pole guard");
  const double dlon = step.zonal_km / (kDeg * kEarthRadiusKm * std::cos(lat_mean * kDeg));
  return Fix{t, lat, normalize_lon(from.lon + dlon)};
}

DisplacementSeries displacement_series(const Track& track) {
  const auto fixes = track.fixes();
  const std::size_t n = fixes.size() - 1;
  DisplacementSeries out;
  out.id = track.id();
  out.start = track.start() + track.step_s();
  out.step_s = track.step_s();
  out.zonal_km.resize(n);
  out.meridional_km.resize(n);
  out.total_km.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = zonal_meridional(fixes[i], fixes[i + 1]);
    out.zonal_km[i] = c.zonal_km;
    out.meridional_km[i] = c.meridional_km;
    out.total_km[i] = geodesic_km(fixes[i], fixes[i + 1]);
  }
  return out;
}

const std::vector<double>& select(const DisplacementSeries& series, Channel channel) {
  switch (channel) {
    case Channel::Zonal: return series.zonal_km;
    case Channel::Meridional: return series.meridional_km;
    case Channel::Total: break;
  }
  return series.total_km;
}

}  // namespace icedrift::geodesy
