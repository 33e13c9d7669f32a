#include "icedrift/reference.hpp"

#include <cmath>
#include <numbers>

#include "icedrift/error.hpp"
#include "icedrift/pca.hpp"

namespace icedrift::reference {

std::vector<spectral::Complex> brute_force_transform(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<spectral::Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    spectral::Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      // k*j mod n is the same angle, kept small for accuracy.
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * j % n) /
                           static_cast<double>(n);
      acc += x[j] * spectral::Complex{std::cos(angle), std::sin(angle)};
    }
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

spectral::Spectrum windowed_dft(std::span<const double> x, double step_s) {
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::WindowTooShort, "need at least two samples");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) throw Error(ErrorCode::NonFiniteInput, "series contains NaN or Inf");
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(n - 1));
    y[i] = x[i] * w;
  }
  const auto two_sided = brute_force_transform(y);

  spectral::Spectrum s;
  s.n = n;
  s.step_s = step_s;
  const std::size_t bins = n / 2 + 1;
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::abs(two_sided[k]);
    const double fold = (k == 0 || 2 * k == n) ? 1.0 : 2.0;
    s.freq_uhz.push_back(static_cast<double>(k) / (static_cast<double>(n) * step_s) * 1e6);
    s.amplitude_km.push_back(mag);
    s.psd_km2_per_uhz.push_back(fold * mag * mag * static_cast<double>(n) * step_s * 1e-6);
  }
  return s;
}

std::vector<spectral::Spectrum> windowed_dft_batch(std::span<const std::vector<double>> series,
                                                   double step_s) {
  std::vector<spectral::Spectrum> out;
  out.reserve(series.size());
  for (const auto& s : series) out.push_back(spectral::windowed_dft(s, step_s));
  return out;
}

Matrix correlation_matrix(const Matrix& x) {
  const std::size_t p = x.cols();
  Matrix c(p, p);
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < p; ++j) cols.push_back(x.column(j));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) c(i, j) = pca::pearson_r(cols[i], cols[j]);
  return c;
}

}  // namespace icedrift::reference
