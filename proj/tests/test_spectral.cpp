#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "icedrift/error.hpp"
#include "icedrift/reference.hpp"
#include "icedrift/spectral.hpp"

using namespace icedrift;
using namespace icedrift::spectral;

namespace {

constexpr double kPi = std::numbers::pi;

// Literal O(N^2) evaluation with the window multiplied in; independent of the library.
std::vector<Complex> oracle_windowed(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    long double re = 0, im = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const long double w = 0.5L - 0.5L * std::cos(2.0L * kPi * j / (n - 1));
      const long double ang = -2.0L * kPi * static_cast<long double>((k * j) % n) / n;
      re += x[j] * w * std::cos(ang);
      im += x[j] * w * std::sin(ang);
    }
    out[k] = Complex(static_cast<double>(re / n), static_cast<double>(im / n));
  }
  return out;
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

}  // namespace

TEST_SUITE("hann_window") {
  TEST_CASE("small windows") {
    CHECK(hann_window(2).w == std::vector<double>{0.0, 0.0});
    const auto w3 = hann_window(3).w;
    CHECK(w3[0] == 0.0);
    CHECK(w3[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w3[2] == 0.0);
    const auto w4 = hann_window(4).w;
    CHECK(w4[0] == 0.0);
    CHECK(w4[1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(w4[2] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(w4[3] == 0.0);
  }

  TEST_CASE("too short") {
    CHECK_THROWS_AS(hann_window(1), Error);
    CHECK_THROWS_AS(hann_window(0), Error);
  }

  TEST_CASE("property: symmetric, zero endpoints, bounded, sums to (n-1)/2") {
    for (std::size_t n = 3; n < 300; ++n) {
      const auto w = hann_window(n).w;
      CHECK(w.front() == 0.0);
      CHECK(w.back() == 0.0);
      double sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(w[i] == w[n - 1 - i]);
        CHECK(w[i] >= 0.0);
        CHECK(w[i] <= 1.0);
        sum += w[i];
      }
      CHECK(sum == doctest::Approx((n - 1) / 2.0).epsilon(1e-12));
    }
  }
}

TEST_SUITE("windowed_dft") {
  TEST_CASE("zeros and constants") {
    const auto zero = windowed_dft(std::vector<double>(17, 0.0));
    for (double a : zero.amplitude_km) CHECK(a == 0.0);

    const auto ones = windowed_dft(std::vector<double>(4, 1.0));
    REQUIRE(ones.bins() == 3);
    CHECK(ones.amplitude_km[0] == doctest::Approx(0.375).epsilon(1e-14));
  }

  TEST_CASE("bin-centred sinusoid peaks at its bin") {
    const std::size_t n = 1024, k0 = 37;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2 * kPi * k0 * i / n);
    const auto s = windowed_dft(x);
    const auto peak = std::max_element(s.amplitude_km.begin(), s.amplitude_km.end()) - s.amplitude_km.begin();
    CHECK(static_cast<std::size_t>(peak) == k0);
    for (std::size_t k = 0; k < s.bins(); ++k)
      if (k + 2 < k0 || k > k0 + 2) CHECK(s.amplitude_km[k0] >= 10 * s.amplitude_km[k]);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(windowed_dft(std::vector<double>{1.0}), Error);
    try {
      windowed_dft(std::vector<double>{1.0, NAN, 2.0});
      FAIL("expected NonFiniteInput");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteInput);
    }
  }

  TEST_CASE("N = 2 gives a valid two-bin spectrum") {
    const auto s = windowed_dft(std::vector<double>{3.0, -1.0});
    CHECK(s.bins() == 2);
    CHECK(s.amplitude_km == std::vector<double>{0.0, 0.0});
  }

  TEST_CASE("property: matches the literal sum for every N up to 256") {
    std::mt19937_64 rng(21);
    for (std::size_t n = 2; n <= 256; ++n) {
      const auto x = random_series(rng, n);
      const auto fast = windowed_transform(x);
      const auto slow = oracle_windowed(x);
      double scale = 0;
      for (const auto& v : slow) scale = std::max(scale, std::abs(v));
      for (std::size_t k = 0; k < n; ++k)
        CHECK(std::abs(fast[k] - slow[k]) <= 1e-10 * std::max(std::abs(slow[k]), scale));
      const auto spec = windowed_dft(x);
      for (std::size_t k = 0; k < spec.bins(); ++k)
        CHECK(std::fabs(spec.amplitude_km[k] - std::abs(slow[k])) <= 1e-10 * std::max(std::abs(slow[k]), scale));
    }
  }

  TEST_CASE("property: reference implementation agrees with the oracle") {
    std::mt19937_64 rng(22);
    for (std::size_t n : {2u, 3u, 31u, 64u, 100u}) {
      const auto x = random_series(rng, n);
      const auto ref = reference::windowed_dft(x, 1800.0);
      const auto slow = oracle_windowed(x);
      for (std::size_t k = 0; k < ref.bins(); ++k)
        CHECK(std::abs(ref.amplitude_km[k] - std::abs(slow[k])) < 1e-12);
    }
  }

  TEST_CASE("property: Parseval, linearity, conjugate symmetry") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + rng() % 700;
      const auto x = random_series(rng, n);
      const auto w = hann_window(n).w;
      const auto X = windowed_transform(x);

      double energy = 0, spectral = 0;
      for (std::size_t i = 0; i < n; ++i) energy += (x[i] * w[i]) * (x[i] * w[i]);
      for (const auto& v : X) spectral += std::norm(v);
      CHECK(energy == doctest::Approx(n * spectral).epsilon(1e-9));

      // One-sided PSD carries the same energy.
      const auto s = windowed_dft(x);
      double psd_sum = 0;
      for (double p : s.psd_km2_per_uhz) psd_sum += p;
      CHECK(psd_sum == doctest::Approx(energy * 1800.0 * 1e-6).epsilon(1e-9));

      for (std::size_t k = 1; k < n; ++k)
        CHECK(std::abs(X[k]) == doctest::Approx(std::abs(X[n - k])).epsilon(1e-9).scale(1e-12));

      const double a = 3.5;
      std::vector<double> ax(x);
      for (auto& v : ax) v *= a;
      const auto sa = windowed_dft(ax);
      for (std::size_t k = 0; k < s.bins(); ++k)
        CHECK(sa.amplitude_km[k] == doctest::Approx(a * s.amplitude_km[k]).epsilon(1e-12).scale(1e-12));
    }
  }

  TEST_CASE("batch equals per-series and the serial reference batch") {
    std::mt19937_64 rng(24);
    std::vector<std::vector<double>> series;
    for (int i = 0; i < 12; ++i) series.push_back(random_series(rng, 50 + 37 * i));
    const auto parallel = windowed_dft_batch(series);
    const auto serial = reference::windowed_dft_batch(series, 1800.0);
    REQUIRE(parallel.size() == series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
      CHECK(parallel[i].amplitude_km == serial[i].amplitude_km);
      CHECK(parallel[i].psd_km2_per_uhz == serial[i].psd_km2_per_uhz);
    }
  }

  TEST_CASE("batch rethrows the failing series") {
    std::vector<std::vector<double>> series{{1, 2, 3}, {1}};
    CHECK_THROWS_AS(windowed_dft_batch(series), Error);
  }
}

TEST_SUITE("frequency_axis") {
  TEST_CASE("n = 4 at 30 min") {
    const auto f = frequency_axis(4, 1800);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == doctest::Approx(138.8888888888889));
    CHECK(f[2] == doctest::Approx(277.77777777777777));
  }

  TEST_CASE("even n ends at the Nyquist frequency, spacing is exact") {
    for (std::size_t n : {2u, 10u, 2048u, 17520u}) {
      const auto f = frequency_axis(n, 1800);
      CHECK(f.back() == doctest::Approx(277.77777777777777).epsilon(1e-12));
      const double df = 1e6 / (n * 1800.0);
      for (std::size_t k = 1; k < f.size(); ++k) CHECK(f[k] - f[k - 1] == doctest::Approx(df).epsilon(1e-9));
    }
  }

  TEST_CASE("tidal bin period") {
    // 1 / 22.6 uHz in hours
    CHECK(1e6 / 22.6 / 3600.0 == doctest::Approx(12.291052114060964));
    const auto f = frequency_axis(17520, 1800);
    const auto nearest = std::min_element(f.begin(), f.end(), [](double a, double b) {
      return std::fabs(a - 22.6) < std::fabs(b - 22.6);
    });
    CHECK(nearest - f.begin() == 713);
    CHECK(1e6 / *nearest / 3600.0 == doctest::Approx(12.29).epsilon(0.01 / 12.29));
  }
}

TEST_SUITE("find_peaks") {
  Spectrum with_psd(std::vector<double> psd) {
    Spectrum s;
    s.n = 2 * (psd.size() - 1);
    for (std::size_t k = 0; k < psd.size(); ++k) s.freq_uhz.push_back(double(k));
    s.amplitude_km = psd;
    s.psd_km2_per_uhz = std::move(psd);
    return s;
  }

  TEST_CASE("monotone decreasing -> DC only") {
    const auto peaks = find_peaks(with_psd({10, 5, 4, 3, 2, 1}), 3.0);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].bin == 0);
  }

  TEST_CASE("flat -> no strict maximum") {
    CHECK(find_peaks(with_psd({2, 2, 2, 2}), 3.0).empty());
  }

  TEST_CASE("prominence filters small bumps, sorted by psd") {
    const auto peaks = find_peaks(with_psd({100, 10, 1, 9, 1, 1.5, 1.2, 40, 2, 1}), 3.0);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0].bin == 0);
    CHECK(peaks[1].bin == 7);
    CHECK(peaks[2].bin == 3);
  }

  TEST_CASE("synthetic tide recovered within one bin") {
    const std::size_t n = 2048;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 0.3 + 0.5 * std::sin(2 * kPi * 22.6e-6 * 1800.0 * i);
    const auto s = windowed_dft(x);
    const auto peaks = find_peaks(s, 3.0);
    const auto first_non_dc = std::find_if(peaks.begin(), peaks.end(), [](const Peak& p) { return p.bin != 0; });
    REQUIRE(first_non_dc != peaks.end());
    CHECK(std::fabs(first_non_dc->freq_uhz - 22.6) <= s.freq_uhz[1]);
  }
}

TEST_CASE("spectrum CSV layout") {
  std::ostringstream out;
  write_csv(out, windowed_dft(std::vector<double>(4, 1.0)));
  const auto text = out.str();
  CHECK(text.starts_with("freq_uhz,amplitude_km,psd_km2_per_uhz\n0,0.37"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
