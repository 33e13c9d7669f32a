#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "icedrift/geodesy.hpp"
#include "icedrift/ingest.hpp"
#include "icedrift/matrix.hpp"
#include "icedrift/time.hpp"

namespace icedrift::pca {

/// n x p displacement matrix; column j is buoy ids[j], row i is time times[i].
struct EnsembleMatrix {
  std::vector<UtcSeconds> times;
  std::vector<std::string> ids;
  Matrix x;
};

/// Displacement columns for an aligned ensemble, one per slice.
EnsembleMatrix build_ensemble(const ingest::EnsembleWindow& window, geodesy::Channel channel);

struct Standardized {
  Matrix z;
  std::vector<double> mu;
  std::vector<double> sigma;  ///< n - 1 denominator
};

/// Centres and scales every column. Throws DegenerateColumn naming the first
/// column whose standard deviation is at most 1e-12.
Standardized standardize(const Matrix& x, std::span<const std::string> ids = {});

/// Z^T Z / (n - 1) for a standardized Z.
Matrix correlation_matrix(const Matrix& z);

struct EigenSystem {
  std::vector<double> values;  ///< descending
  Matrix vectors;              ///< column j pairs with values[j]
};

struct JacobiOptions {
  int max_sweeps = 100;
  /// Convergence when the off-diagonal Frobenius norm is below this times ||C||_F.
  double relative_tolerance = 1e-12;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenpairs are
/// stably sorted by descending eigenvalue and each eigenvector's first
/// component of magnitude above 1e-12 is made positive. Throws
/// InvalidArgument for an asymmetric input, NoConvergence past the sweep budget.
EigenSystem eigendecompose_sym(const Matrix& c, const JacobiOptions& options = {});

/// Scores Z' = Z P[:, 0..k). Throws BadRank unless 1 <= k <= p.
Matrix project(const Matrix& z, const Matrix& eigvecs, std::size_t k);

/// X' = (Z' P[:, 0..k)^T) * sigma + mu, column-wise. Throws ShapeMismatch.
Matrix reconstruct(const Matrix& scores, const Matrix& eigvecs, std::size_t k,
                   std::span<const double> mu, std::span<const double> sigma);

/// Fraction of the eigenvalue total held by the first k eigenvalues. Values
/// in [-1e-10, 0) count as zero.
double explained_variance(std::span<const double> eigvals, std::size_t k);

/// Per-column root-mean-square of x - x_hat. Throws ShapeMismatch.
std::vector<double> rms_error(const Matrix& x, const Matrix& x_hat);

/// Sample Pearson correlation. Throws ShapeMismatch or DegenerateColumn.
double pearson_r(std::span<const double> a, std::span<const double> b);

struct PcaModel {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<double> eigvals;
  Matrix eigvecs;
  std::vector<double> explained;  ///< cumulative, explained[k - 1] for k PCs
};

struct PcaFit {
  PcaModel model;
  Matrix z;
  Matrix correlation;
};

/// standardize -> correlation -> eigendecomposition. Throws NegativeEigenvalue
/// if an eigenvalue falls below -1e-10.
PcaFit fit(const Matrix& x, std::span<const std::string> ids = {});

}  // namespace icedrift::pca
