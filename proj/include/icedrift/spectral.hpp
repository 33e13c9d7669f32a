#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "icedrift/time.hpp"

namespace icedrift::spectral {

using Complex = std::complex<double>;

struct WindowWeights {
  std::size_t n = 0;
  std::vector<double> w;
};

/// Symmetric Hann taper w[i] = 0.5 - 0.5 cos(2 pi i / (n - 1)). Throws
/// WindowTooShort for n < 2.
WindowWeights hann_window(std::size_t n);

/// Two-sided transform X_k = (1/N) sum_n x[n] exp(-2 pi i k n / N), k = 0..N-1.
/// Radix-2 for powers of two, Bluestein's chirp-z otherwise.
std::vector<Complex> transform(std::span<const double> x);

/// transform() of the Hann-tapered input. Throws NonFiniteInput.
std::vector<Complex> windowed_transform(std::span<const double> x);

/// One-sided spectrum of a real series sampled every `step_s` seconds.
struct Spectrum {
  std::size_t n = 0;
  double step_s = static_cast<double>(kGridStep);
  std::vector<double> freq_uhz;
  std::vector<double> amplitude_km;
  /// c_k |X_k|^2 N step_s 1e-6, with c_k = 2 except at DC and Nyquist.
  std::vector<double> psd_km2_per_uhz;

  std::size_t bins() const noexcept { return freq_uhz.size(); }
};

/// Bin centres k / (n step_s) in micro-hertz for k = 0..n/2.
std::vector<double> frequency_axis(std::size_t n, double step_s = static_cast<double>(kGridStep));

/// Hann-windowed, 1/N-normalized DFT of `x`. Throws WindowTooShort for fewer
/// than two samples and NonFiniteInput for NaN or infinite entries.
Spectrum windowed_dft(std::span<const double> x, double step_s = static_cast<double>(kGridStep));

/// Parallel over series; output order matches input order.
std::vector<Spectrum> windowed_dft_batch(std::span<const std::vector<double>> series,
                                         double step_s = static_cast<double>(kGridStep));

struct Peak {
  std::size_t bin = 0;
  double freq_uhz = 0.0;
  double psd = 0.0;
};

/// Strict local maxima of the PSD that stand at least `min_prominence_ratio`
/// times above the larger of their neighbouring local minima, largest first.
/// A side that descends all the way to the array edge imposes no constraint.
std::vector<Peak> find_peaks(const Spectrum& spec, double min_prominence_ratio);

/// CSV with header `freq_uhz,amplitude_km,psd_km2_per_uhz`.
void write_csv(std::ostream& out, const Spectrum& spec);

}  // namespace icedrift::spectral
