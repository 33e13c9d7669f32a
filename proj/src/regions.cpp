#include "icedrift/regions.hpp"

namespace icedrift::regions {

std::string_view to_string(Region region) {
  return region == Region::Amerasian ? "amerasian" : "eurasian";
}

bool in_amerasian_window(const Fix& fix) {
  const bool lon_inside = (fix.lon >= -180.0 && fix.lon <= -120.0) || fix.lon == 180.0;
  return lon_inside && fix.lat >= 65.0 && fix.lat <= 85.0;
}

Region classify(const Track& track) {
  return in_amerasian_window(track[0]) ? Region::Amerasian : Region::Eurasian;
}

Partition partition(const std::vector<Track>& tracks) {
  Partition out;
  for (const auto& t : tracks)
    (classify(t) == Region::Amerasian ? out.amerasian : out.eurasian).push_back(t);
  return out;
}

}  // namespace icedrift::regions
