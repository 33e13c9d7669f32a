#include "icedrift/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>

#include "icedrift/error.hpp"
#include "icedrift/io.hpp"

namespace icedrift::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// In-place iterative radix-2 FFT; inverse omits the 1/N factor.
void fft_pow2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<Complex> twiddle(n / 2);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n / 2; ++k)
    twiddle[k] = std::polar(1.0, sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + half] * twiddle[j * stride];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

// Chirp-z evaluation of an arbitrary-length DFT through a power-of-two convolution.
std::vector<Complex> bluestein(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  const std::size_t m = std::bit_ceil(2 * n - 1);
  std::vector<Complex> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle small so the chirp stays accurate for large n.
    const auto k2 = static_cast<unsigned long long>(k) * k % (2ULL * n);
    chirp[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n));
  }
  std::vector<Complex> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_pow2(a, true);

  std::vector<Complex> out(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

void check_input(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorCode::WindowTooShort, "need at least two samples");
  for (double v : x)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "series contains NaN or Inf");
}

}  // namespace

WindowWeights hann_window(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::WindowTooShort, "Hann window needs n >= 2");
  WindowWeights out{n, std::vector<double>(n)};
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    out.w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / denom);
  // Pin the endpoints and mirror so the taper is exactly symmetric.
  out.w.front() = out.w.back() = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) out.w[n - 1 - i] = out.w[i];
  return out;
}

std::vector<Complex> transform(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::vector<Complex> a(x.begin(), x.end());
  if (std::has_single_bit(n)) {
    fft_pow2(a, false);
  } else {
    a = bluestein(a);
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : a) v *= scale;
  return a;
}

std::vector<Complex> windowed_transform(std::span<const double> x) {
  check_input(x);
  const auto window = hann_window(x.size());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * window.w[i];
  return transform(y);
}

std::vector<double> frequency_axis(std::size_t n, double step_s) {
  if (n < 2) throw Error(ErrorCode::WindowTooShort, "frequency axis needs n >= 2");
  std::vector<double> f(n / 2 + 1);
  const double span_s = static_cast<double>(n) * step_s;
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = static_cast<double>(k) / span_s * 1e6;
  return f;
}

namespace {

Spectrum assemble(std::span<const Complex> two_sided, double step_s) {
  const std::size_t n = two_sided.size();
  Spectrum s;
  s.n = n;
  s.step_s = step_s;
  s.freq_uhz = frequency_axis(n, step_s);
  const std::size_t bins = s.freq_uhz.size();
  s.amplitude_km.resize(bins);
  s.psd_km2_per_uhz.resize(bins);
  const double density = static_cast<double>(n) * step_s * 1e-6;
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::abs(two_sided[k]);
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    s.amplitude_km[k] = mag;
    s.psd_km2_per_uhz[k] = (unpaired ? 1.0 : 2.0) * mag * mag * density;
  }
  return s;
}

}  // namespace

Spectrum windowed_dft(std::span<const double> x, double step_s) {
  return assemble(windowed_transform(x), step_s);
}

std::vector<Spectrum> windowed_dft_batch(std::span<const std::vector<double>> series,
                                         double step_s) {
  const auto count = static_cast<std::ptrdiff_t>(series.size());
  std::vector<Spectrum> out(series.size());
  std::vector<std::exception_ptr> errors(series.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[i] = windowed_dft(series[i], step_s);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<Peak> find_peaks(const Spectrum& spec, double min_prominence_ratio) {
  const auto& p = spec.psd_km2_per_uhz;
  const std::size_t m = p.size();
  std::vector<Peak> peaks;
  for (std::size_t k = 0; k < m; ++k) {
    const bool above_left = k == 0 || p[k] > p[k - 1];
    const bool above_right = k + 1 == m || p[k] > p[k + 1];
    if (!above_left || !above_right || m < 2) continue;

    // Nearest local minimum on each side; none if the descent reaches the edge.
    double base = 0.0;
    bool constrained = false;
    if (k > 0) {
      std::size_t j = k - 1;
      while (j > 0 && p[j - 1] <= p[j]) --j;
      if (j > 0) {
        base = std::max(base, p[j]);
        constrained = true;
      }
    }
    if (k + 1 < m) {
      std::size_t j = k + 1;
      while (j + 1 < m && p[j + 1] <= p[j]) ++j;
      if (j + 1 < m) {
        base = constrained ? std::max(base, p[j]) : p[j];
        constrained = true;
      }
    }
    if (!constrained || p[k] >= min_prominence_ratio * base)
      peaks.push_back(Peak{k, spec.freq_uhz[k], p[k]});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.psd > b.psd; });
  return peaks;
}

void write_csv(std::ostream& out, const Spectrum& spec) {
  out << "freq_uhz,amplitude_km,psd_km2_per_uhz\n";
  for (std::size_t k = 0; k < spec.bins(); ++k)
    out << io::format_double(spec.freq_uhz[k]) << ',' << io::format_double(spec.amplitude_km[k])
        << ',' << io::format_double(spec.psd_km2_per_uhz[k]) << '\n';
}

}  // namespace icedrift::spectral
