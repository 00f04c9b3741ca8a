#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "sdg/error.hpp"
#include "sdg/kernels.hpp"
#include "sdg/tsne.hpp"

namespace sdg::kernels {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

Matrix pairwise_sq_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  Matrix d(n, n);
  const double* data = x.data();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* xi = data + i * m;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double* xj = data + j * m;
      double s = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        const double diff = xi[k] - xj[k];
        s += diff * diff;
      }
      d(i, j) = s;
    }
  }
  return d;
}

RowCalibration calibrate_rows(const Matrix& sq_distances, double perplexity) {
  const Eigen::Index n = sq_distances.rows();
  RowCalibration out;
  out.conditional = Matrix::Zero(n, n);
  out.sigmas.assign(static_cast<std::size_t>(n), 0.0);
  out.perplexities.assign(static_cast<std::size_t>(n), 0.0);

  // Lowest failing row wins so the reported error is thread-count independent.
  Eigen::Index failed_row = n;
  std::string failure;

#pragma omp parallel
  {
    std::vector<double> row(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
#pragma omp for schedule(dynamic, 16)
    for (Eigen::Index i = 0; i < n; ++i) {
      std::size_t k = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) row[k++] = sq_distances(i, j);
      try {
        const auto cal = tsne::calibrate_sigma(row, perplexity);
        k = 0;
        for (Eigen::Index j = 0; j < n; ++j)
          if (j != i) out.conditional(i, j) = cal.conditional[k++];
        out.sigmas[static_cast<std::size_t>(i)] = cal.sigma;
        out.perplexities[static_cast<std::size_t>(i)] = cal.perplexity;
      } catch (const std::exception& e) {
#pragma omp critical(sdg_calibration_failure)
        if (i < failed_row) {
          failed_row = i;
          failure = e.what();
        }
      }
    }
  }
  if (failed_row < n) throw CalibrationFailed(static_cast<long>(failed_row), failure);
  return out;
}

double tsne_gradient(const Matrix& p, const Matrix& y, double exaggeration, Matrix& grad) {
  const Eigen::Index n = y.rows();
  const Eigen::Index dims = y.cols();
  grad.resize(n, dims);
  std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);
  const double* yd = y.data();

#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* yi = yd + i * dims;
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double* yj = yd + j * dims;
      double d2 = 0.0;
      for (Eigen::Index k = 0; k < dims; ++k) {
        const double diff = yi[k] - yj[k];
        d2 += diff * diff;
      }
      s += 1.0 / (1.0 + d2);
    }
    row_sums[static_cast<std::size_t>(i)] = s;
  }
  double z = 0.0;
  for (double s : row_sums) z += s;
  const double inv_z = 1.0 / z;

#pragma omp parallel
  {
    std::vector<double> acc(static_cast<std::size_t>(dims));
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* yi = yd + i * dims;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double* yj = yd + j * dims;
        double d2 = 0.0;
        for (Eigen::Index k = 0; k < dims; ++k) {
          const double diff = yi[k] - yj[k];
          d2 += diff * diff;
        }
        const double kernel = 1.0 / (1.0 + d2);
        const double mult = (exaggeration * p(i, j) - kernel * inv_z) * kernel;
        for (Eigen::Index k = 0; k < dims; ++k) acc[static_cast<std::size_t>(k)] += mult * (yi[k] - yj[k]);
      }
      for (Eigen::Index k = 0; k < dims; ++k) grad(i, k) = 4.0 * acc[static_cast<std::size_t>(k)];
    }
  }
  return z;
}

double kl_divergence(const Matrix& p, const Matrix& y) {
  const Eigen::Index n = y.rows();
  const Eigen::Index dims = y.cols();
  const double* yd = y.data();
  std::vector<double> row_z(static_cast<std::size_t>(n), 0.0);
  std::vector<double> row_kl(static_cast<std::size_t>(n), 0.0);

  auto kernel_at = [&](Eigen::Index i, Eigen::Index j) {
    const double* yi = yd + i * dims;
    const double* yj = yd + j * dims;
    double d2 = 0.0;
    for (Eigen::Index k = 0; k < dims; ++k) {
      const double diff = yi[k] - yj[k];
      d2 += diff * diff;
    }
    return 1.0 / (1.0 + d2);
  };

#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) s += kernel_at(i, j);
    row_z[static_cast<std::size_t>(i)] = s;
  }
  double z = 0.0;
  for (double s : row_z) z += s;

#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double pij = std::max(p(i, j), tsne::kProbabilityFloor);
      const double qij = std::max(kernel_at(i, j) / z, tsne::kProbabilityFloor);
      s += pij * std::log(pij / qij);
    }
    row_kl[static_cast<std::size_t>(i)] = s;
  }
  double kl = 0.0;
  for (double s : row_kl) kl += s;
  return kl;
}

std::vector<std::vector<std::size_t>> radius_neighbors(const Matrix& points, double eps) {
  const Eigen::Index n = points.rows();
  const Eigen::Index dims = points.cols();
  const double eps2 = eps * eps;
  const double* data = points.data();
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 32)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* pi = data + i * dims;
    auto& list = out[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double* pj = data + j * dims;
      double d2 = 0.0;
      for (Eigen::Index k = 0; k < dims; ++k) {
        const double diff = pi[k] - pj[k];
        d2 += diff * diff;
      }
      if (d2 <= eps2) list.push_back(static_cast<std::size_t>(j));
    }
  }
  return out;
}

}  // namespace sdg::kernels
