#pragma once

#include <span>
#include <vector>

#include "icedrift/matrix.hpp"
#include "icedrift/spectral.hpp"

/// Serial, deliberately naive counterparts of the parallel and fast kernels.
/// Kept for tests and for the benchmark, not used by the pipeline.
namespace icedrift::reference {

/// O(N^2) evaluation of (1/N) sum_n x[n] exp(-2 pi i k n / N).
std::vector<spectral::Complex> brute_force_transform(std::span<const double> x);

/// Same output as spectral::windowed_dft, built on brute_force_transform.
spectral::Spectrum windowed_dft(std::span<const double> x, double step_s);

/// One windowed_dft call per series, sequentially.
std::vector<spectral::Spectrum> windowed_dft_batch(std::span<const std::vector<double>> series,
                                                   double step_s);

/// Correlation matrix of the raw columns of x from pairwise pearson_r.
Matrix correlation_matrix(const Matrix& x);

}  // namespace icedrift::reference
