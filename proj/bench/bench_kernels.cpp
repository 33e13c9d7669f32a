// Parallel / fast kernels against their serial reference counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "icedrift/pca.hpp"
#include "icedrift/reference.hpp"
#include "icedrift/spectral.hpp"

using namespace icedrift;

namespace {

std::vector<double> series(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

std::vector<std::vector<double>> batch(std::size_t count, std::size_t n) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(series(n, i));
  return out;
}

Matrix ensemble(std::size_t n, std::size_t p) {
  Matrix x(n, p);
  const auto v = series(n * p, 7);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) x(i, j) = v[i * p + j];
  return x;
}

void BM_Transform(benchmark::State& state) {
  const auto x = series(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::transform(x));
}

void BM_BruteForceTransform(benchmark::State& state) {
  const auto x = series(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::brute_force_transform(x));
}

void BM_SpectraBatch(benchmark::State& state) {
  const auto b = batch(64, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::windowed_dft_batch(b));
}

void BM_SpectraBatchSerial(benchmark::State& state) {
  const auto b = batch(64, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::windowed_dft_batch(b, 1800.0));
}

void BM_Correlation(benchmark::State& state) {
  const auto z = pca::standardize(ensemble(17520, static_cast<std::size_t>(state.range(0)))).z;
  for (auto _ : state) benchmark::DoNotOptimize(pca::correlation_matrix(z));
}

void BM_CorrelationPairwise(benchmark::State& state) {
  const auto x = ensemble(17520, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::correlation_matrix(x));
}

}  // namespace

BENCHMARK(BM_Transform)->Arg(256)->Arg(2048)->Arg(17520);
BENCHMARK(BM_BruteForceTransform)->Arg(256)->Arg(2048);
BENCHMARK(BM_SpectraBatch)->Arg(2048)->Arg(17520);
BENCHMARK(BM_SpectraBatchSerial)->Arg(2048)->Arg(17520);
BENCHMARK(BM_Correlation)->Arg(8)->Arg(32);
BENCHMARK(BM_CorrelationPairwise)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
