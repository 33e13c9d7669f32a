#include "icedrift/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icedrift/error.hpp"

namespace icedrift::pca {

namespace {

constexpr double kMinSigma = 1e-12;
constexpr double kEigenFloor = -1e-10;

std::string column_name(std::span<const std::string> ids, std::size_t j) {
  return j < ids.size() ? ids[j] : "column " + std::to_string(j);
}

double sample_sigma(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// One Jacobi rotation zeroing a(p, q); v accumulates the rotations.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EnsembleMatrix build_ensemble(const ingest::EnsembleWindow& window, geodesy::Channel channel) {
  EnsembleMatrix out;
  std::vector<std::vector<double>> columns;
  for (const auto& slice : window.slices) {
    const auto series = geodesy::displacement_series(slice);
    if (out.times.empty())
      for (std::size_t i = 0; i < series.size(); ++i)
        out.times.push_back(series.start + static_cast<UtcSeconds>(i) * series.step_s);
    out.ids.push_back(slice.id());
    columns.push_back(geodesy::select(series, channel));
  }
  out.x = Matrix::from_columns(columns);
  return out;
}

Standardized standardize(const Matrix& x, std::span<const std::string> ids) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 2 || p < 1) throw Error(ErrorCode::ShapeMismatch, "need at least 2 rows and 1 column");

  Standardized out{Matrix(n, p), std::vector<double>(p), std::vector<double>(p)};
  const Matrix xt = x.transposed();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(p); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const auto col = xt.row(j);
    out.mu[j] = mean_of(col);
    out.sigma[j] = sample_sigma(col, out.mu[j]);
  }
  for (std::size_t j = 0; j < p; ++j)
    if (!(out.sigma[j] > kMinSigma))
      throw Error(ErrorCode::DegenerateColumn, "constant series: " + column_name(ids, j));

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) out.z(i, j) = (x(i, j) - out.mu[j]) / out.sigma[j];
  return out;
}

Matrix correlation_matrix(const Matrix& z) {
  const std::size_t n = z.rows();
  const std::size_t p = z.cols();
  if (n < 2) throw Error(ErrorCode::ShapeMismatch, "need at least 2 rows");
  const Matrix zt = z.transposed();
  Matrix c(p, p);
  const double denom = static_cast<double>(n - 1);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(p); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto zi = zt.row(i);
    for (std::size_t j = i; j < p; ++j) {
      const auto zj = zt.row(j);
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += zi[r] * zj[r];
      c(i, j) = s / denom;
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) c(i, j) = c(j, i);
  return c;
}

EigenSystem eigendecompose_sym(const Matrix& c, const JacobiOptions& options) {
  const std::size_t p = c.rows();
  if (c.cols() != p) throw Error(ErrorCode::ShapeMismatch, "eigendecomposition needs a square matrix");
  const double norm = frobenius_norm(c);
  const double sym_tol = 1e-10 * std::max(1.0, norm);
  Matrix a(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      if (std::fabs(c(i, j) - c(j, i)) > sym_tol)
        throw Error(ErrorCode::InvalidArgument, "matrix is not symmetric");
      a(i, j) = 0.5 * (c(i, j) + c(j, i));
    }

  Matrix v = Matrix::identity(p);
  const double target = options.relative_tolerance * norm;
  bool converged = false;
  for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    for (std::size_t i = 0; i + 1 < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) rotate(a, v, i, j);
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence,
                "Jacobi iteration exceeded " + std::to_string(options.max_sweeps) + " sweeps");

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenSystem out{std::vector<double>(p), Matrix(p, p)};
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t src = order[j];
    out.values[j] = a(src, src);
    double sign = 1.0;
    for (std::size_t r = 0; r < p; ++r)
      if (std::fabs(v(r, src)) > 1e-12) {
        sign = v(r, src) < 0.0 ? -1.0 : 1.0;
        break;
      }
    for (std::size_t r = 0; r < p; ++r) out.vectors(r, j) = sign * v(r, src);
  }
  return out;
}

Matrix project(const Matrix& z, const Matrix& eigvecs, std::size_t k) {
  const std::size_t p = eigvecs.cols();
  if (k < 1 || k > p) throw Error(ErrorCode::BadRank, "rank k must lie in [1, p]");
  if (z.cols() != eigvecs.rows())
    throw Error(ErrorCode::ShapeMismatch, "scores and eigenvectors disagree on p");
  Matrix basis(eigvecs.rows(), k);
  for (std::size_t r = 0; r < eigvecs.rows(); ++r)
    for (std::size_t j = 0; j < k; ++j) basis(r, j) = eigvecs(r, j);
  return multiply(z, basis);
}

Matrix reconstruct(const Matrix& scores, const Matrix& eigvecs, std::size_t k,
                   std::span<const double> mu, std::span<const double> sigma) {
  const std::size_t p = eigvecs.rows();
  if (k < 1 || k > eigvecs.cols()) throw Error(ErrorCode::BadRank, "rank k must lie in [1, p]");
  if (scores.cols() != k || mu.size() != p || sigma.size() != p)
    throw Error(ErrorCode::ShapeMismatch, "reconstruction inputs disagree in shape");
  Matrix basis_t(k, p);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t r = 0; r < p; ++r) basis_t(j, r) = eigvecs(r, j);
  Matrix x = multiply(scores, basis_t);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < p; ++j) row[j] = row[j] * sigma[j] + mu[j];
  }
  return x;
}

double explained_variance(std::span<const double> eigvals, std::size_t k) {
  if (k > eigvals.size()) throw Error(ErrorCode::BadRank, "k exceeds the number of eigenvalues");
  double head = 0.0, total = 0.0;
  for (std::size_t j = 0; j < eigvals.size(); ++j) {
    if (eigvals[j] < kEigenFloor)
      throw Error(ErrorCode::NegativeEigenvalue, "eigenvalue below -1e-10");
    const double lambda = std::max(0.0, eigvals[j]);
    total += lambda;
    if (j < k) head += lambda;
  }
  if (total <= 0.0) return k == eigvals.size() ? 1.0 : 0.0;
  return std::clamp(head / total, 0.0, 1.0);
}

std::vector<double> rms_error(const Matrix& x, const Matrix& x_hat) {
  if (x.rows() != x_hat.rows() || x.cols() != x_hat.cols())
    throw Error(ErrorCode::ShapeMismatch, "rms_error needs equal shapes");
  std::vector<double> out(x.cols(), 0.0);
  if (x.rows() == 0) return out;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double d = x(i, j) - x_hat(i, j);
      out[j] += d * d;
    }
  for (auto& v : out) v = std::sqrt(v / static_cast<double>(x.rows()));
  return out;
}

double pearson_r(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw Error(ErrorCode::ShapeMismatch, "pearson_r needs two equal-length series of length >= 2");
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  const double dof = static_cast<double>(a.size() - 1);
  if (!(std::sqrt(saa / dof) > kMinSigma) || !(std::sqrt(sbb / dof) > kMinSigma))
    throw Error(ErrorCode::DegenerateColumn, "pearson_r of a constant series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

PcaFit fit(const Matrix& x, std::span<const std::string> ids) {
  auto standardized = standardize(x, ids);
  Matrix corr = correlation_matrix(standardized.z);
  auto eig = eigendecompose_sym(corr);
  for (double lambda : eig.values)
    if (lambda < kEigenFloor)
      throw Error(ErrorCode::NegativeEigenvalue, "correlation matrix has a negative eigenvalue");

  PcaModel model;
  model.mu = std::move(standardized.mu);
  model.sigma = std::move(standardized.sigma);
  model.eigvals = std::move(eig.values);
  model.eigvecs = std::move(eig.vectors);
  for (std::size_t k = 1; k <= model.eigvals.size(); ++k)
    model.explained.push_back(explained_variance(model.eigvals, k));
  return PcaFit{std::move(model), std::move(standardized.z), std::move(corr)};
}

}  // namespace icedrift::pca
