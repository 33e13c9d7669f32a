#pragma once

#include <string>
#include <vector>

#include "icedrift/track.hpp"

namespace icedrift::geodesy {

/// Mean Earth radius used for every distance in the toolkit.
inline constexpr double kEarthRadiusKm = 6371.0088;
/// Beyond this mean latitude the zonal cosine factor is treated as singular.
inline constexpr double kPoleGuardDeg = 89.999;

/// Great-circle (haversine) distance in km. Exactly symmetric.
double geodesic_km(const Fix& a, const Fix& b);

struct Components {
  double zonal_km = 0.0;       ///< east positive
  double meridional_km = 0.0;  ///< north positive
};

/// Local tangent-plane decomposition of the step a -> b, using the shortest
/// longitude arc and the cosine of the mean latitude. Throws PoleDegenerate.
Components zonal_meridional(const Fix& a, const Fix& b);

/// Inverse of zonal_meridional: the position reached from `from` after moving
/// by `step` km. Throws PoleDegenerate.
Fix offset_by_km(const Fix& from, Components step, UtcSeconds t);

struct DisplacementSeries {
  std::string id;
  UtcSeconds start = 0;  ///< end instant of the first step
  UtcSeconds step_s = kGridStep;
  std::vector<double> zonal_km;
  std::vector<double> meridional_km;
  std::vector<double> total_km;

  std::size_t size() const noexcept { return total_km.size(); }
};

/// Per-step displacements between consecutive fixes; length is size() - 1.
DisplacementSeries displacement_series(const Track& track);

}  // namespace icedrift::geodesy

namespace icedrift::geodesy {

enum class Channel { Total, Zonal, Meridional };

const std::vector<double>& select(const DisplacementSeries& series, Channel channel);

}  // namespace icedrift::geodesy
