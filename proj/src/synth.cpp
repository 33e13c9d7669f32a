#include "icedrift/synth.hpp"

#include <cmath>
#include <numbers>

#include "icedrift/error.hpp"
#include "icedrift/geodesy.hpp"

namespace icedrift::synth {

namespace {

constexpr double kMaxSynthLat = 89.99;
constexpr double kNyquistUhz = 1e6 / (2.0 * static_cast<double>(kGridStep));

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

void validate(const SynthParams& p) {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (p.duration_steps < 2) fail("duration_steps must be at least 2");
  if (!std::isfinite(p.mean_u) || !std::isfinite(p.mean_v)) fail("mean drift must be finite");
  if (!(p.tide_amp_km >= 0.0) || !std::isfinite(p.tide_amp_km)) fail("tide_amp_km must be >= 0");
  if (!(p.noise_sigma_km >= 0.0) || !std::isfinite(p.noise_sigma_km))
    fail("noise_sigma_km must be >= 0");
  if (!(p.tide_freq_uhz >= 0.0) || p.tide_freq_uhz > kNyquistUhz + 1e-9)
    fail("tide_freq_uhz must lie in [0, Nyquist]");
  if (!std::isfinite(p.tide_phase_rad)) fail("tide_phase_rad must be finite");
  if (p.origin.t < 0 || p.origin.t % kGridStep != 0)
    fail("origin time must be a non-negative half-hour mark");
  if (!(std::fabs(p.origin.lat) <= kMaxSynthLat) || !std::isfinite(p.origin.lon))
    fail("origin position out of range");
}

namespace {

Track integrate(const SynthParams& p, double noise_sigma, std::uint64_t seed, std::string id) {
  Rng rng(seed);
  const double omega = 2.0 * std::numbers::pi * p.tide_freq_uhz * 1e-6;
  std::vector<Fix> fixes;
  fixes.reserve(p.duration_steps + 1);
  fixes.push_back(Fix{p.origin.t, p.origin.lat, normalize_lon(p.origin.lon)});
  for (std::size_t i = 0; i < p.duration_steps; ++i) {
    const double t_i = static_cast<double>(i) * static_cast<double>(kGridStep);
    const double phase = omega * t_i + p.tide_phase_rad;
    const double e_u = noise_sigma * rng.normal();
    const double e_v = noise_sigma * rng.normal();
    const geodesy::Components step{p.mean_u + p.tide_amp_km * std::sin(phase) + e_u,
                                   p.mean_v + p.tide_amp_km * std::cos(phase) + e_v};
    const Fix next = geodesy::offset_by_km(fixes.back(), step, fixes.back().t + kGridStep);
    if (std::fabs(next.lat) > kMaxSynthLat)
      throw Error(ErrorCode::PoleDegenerate, "synthetic track passes 89.99 degrees latitude");
    fixes.push_back(next);
  }
  return Track(std::move(id), std::move(fixes));
}

}  // namespace

Track generate(const SynthParams& params, std::string id) {
  validate(params);
  return integrate(params, params.noise_sigma_km, params.seed, std::move(id));
}

std::pair<Track, Track> generate_pair(const SynthParams& params, double noise_sigma_b,
                                      std::uint64_t seed_b, std::string id_a, std::string id_b) {
  validate(params);
  if (!(noise_sigma_b >= 0.0) || !std::isfinite(noise_sigma_b))
    throw Error(ErrorCode::InvalidArgument, "noise_sigma_b must be >= 0");
  return {integrate(params, params.noise_sigma_km, params.seed, std::move(id_a)),
          integrate(params, noise_sigma_b, seed_b, std::move(id_b))};
}

}  // namespace icedrift::synth
