#pragma once

#include <string_view>
#include <vector>

#include "icedrift/track.hpp"

namespace icedrift::regions {

enum class Region { Amerasian, Eurasian };

/// "amerasian" or "eurasian".
std::string_view to_string(Region region);

/// True inside 180-120 W, 65-85 N, all edges inclusive. +180 counts as 180 W.
bool in_amerasian_window(const Fix& fix);

/// Labels a track by its first fix.
Region classify(const Track& track);

struct Partition {
  std::vector<Track> amerasian;
  std::vector<Track> eurasian;
};

/// Order-preserving split by classify().
Partition partition(const std::vector<Track>& tracks);

}  // namespace icedrift::regions
