#include <algorithm>
#include <cmath>

#include "sdg/error.hpp"
#include "sdg/kernels.hpp"
#include "sdg/tsne.hpp"

namespace sdg::kernels::serial {

// Same evaluation order as the parallel kernels (per-row partial sums in
// column order, then rows summed in order), without any threading.

namespace {

double sq_dist(const Matrix& x, Eigen::Index i, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double diff = x(i, k) - x(j, k);
    s += diff * diff;
  }
  return s;
}

double normalizer(const Matrix& y) {
  double z = 0.0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < y.rows(); ++j)
      if (j != i) row += 1.0 / (1.0 + sq_dist(y, i, j));
    z += row;
  }
  return z;
}

}  // namespace

Matrix pairwise_sq_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = sq_dist(x, i, j);
  return d;
}

RowCalibration calibrate_rows(const Matrix& sq_distances, double perplexity) {
  const Eigen::Index n = sq_distances.rows();
  RowCalibration out;
  out.conditional = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row.push_back(sq_distances(i, j));
    tsne::SigmaCalibration cal;
    try {
      cal = tsne::calibrate_sigma(row, perplexity);
    } catch (const std::exception& e) {
      throw CalibrationFailed(static_cast<long>(i), e.what());
    }
    std::size_t k = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) out.conditional(i, j) = cal.conditional[k++];
    out.sigmas.push_back(cal.sigma);
    out.perplexities.push_back(cal.perplexity);
  }
  return out;
}

double tsne_gradient(const Matrix& p, const Matrix& y, double exaggeration, Matrix& grad) {
  const Eigen::Index n = y.rows();
  const double z = normalizer(y);
  const double inv_z = 1.0 / z;
  grad = Matrix::Zero(n, y.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double kernel = 1.0 / (1.0 + sq_dist(y, i, j));
      const double mult = (exaggeration * p(i, j) - kernel * inv_z) * kernel;
      for (Eigen::Index k = 0; k < y.cols(); ++k) grad(i, k) += mult * (y(i, k) - y(j, k));
    }
    grad.row(i) *= 4.0;
  }
  return z;
}

double kl_divergence(const Matrix& p, const Matrix& y) {
  const Eigen::Index n = y.rows();
  const double z = normalizer(y);
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double pij = std::max(p(i, j), tsne::kProbabilityFloor);
      const double qij = std::max(1.0 / (1.0 + sq_dist(y, i, j)) / z, tsne::kProbabilityFloor);
      row += pij * std::log(pij / qij);
    }
    kl += row;
  }
  return kl;
}

std::vector<std::vector<std::size_t>> radius_neighbors(const Matrix& points, double eps) {
  const Eigen::Index n = points.rows();
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (sq_dist(points, i, j) <= eps * eps) out[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
  return out;
}

}  // namespace sdg::kernels::serial
