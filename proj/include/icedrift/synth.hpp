#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "icedrift/track.hpp"

namespace icedrift::synth {

/// xoshiro256** seeded by four successive SplitMix64 outputs of the seed.
/// The sequence is part of the fixture format and must not change.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// (next_u64() >> 11) * 2^-53, in [0, 1).
  double uniform();
  /// Marsaglia polar method. Each accepted pair yields two deviates; the
  /// first is returned, the second is cached and returned by the next call.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  std::optional<double> spare_;
};

struct SynthParams {
  Fix origin;  ///< origin.t must sit on a half-hour mark
  std::size_t duration_steps = 2048;
  double mean_u = 0.0;  ///< km per step, east
  double mean_v = 0.0;  ///< km per step, north
  double tide_amp_km = 0.0;
  double tide_freq_uhz = 22.6;
  double tide_phase_rad = 0.0;
  double noise_sigma_km = 0.0;
  std::uint64_t seed = 0;
};

/// Throws InvalidArgument on out-of-range parameters.
void validate(const SynthParams& params);

/// Integrates per-step displacements
///   (mean_u + A sin(2 pi f t_i + phi) + e_u, mean_v + A cos(2 pi f t_i + phi) + e_v),
/// t_i = i * 1800 s, from the origin through the tangent-plane inverse. The
/// noise pair (e_u, e_v) is drawn in that order from one Rng per track. The
/// returned track has duration_steps + 1 fixes. Throws PoleDegenerate past 89.99 N/S.
Track generate(const SynthParams& params, std::string id = "synth");

/// Two tracks with the same mean and tidal motion and independent noise: the
/// first uses params.seed / params.noise_sigma_km, the second seed_b / noise_sigma_b.
std::pair<Track, Track> generate_pair(const SynthParams& params, double noise_sigma_b,
                                      std::uint64_t seed_b, std::string id_a = "synth_a",
                                      std::string id_b = "synth_b");

}  // namespace icedrift::synth
