#pragma once

#include <cstddef>
#include <vector>

#include "sdg/types.hpp"

// O(N^2) inner loops of the pipeline. The top-level functions are
// OpenMP-parallel over rows: every row is computed by exactly one thread in
// a fixed inner order, and cross-row sums are reduced serially in row order,
// so results are bit-identical for any thread count. `serial::` holds the
// straightforward reference versions used by the tests and the benchmark.
namespace sdg::kernels {

/// Per-row perplexity calibration of a squared-distance matrix.
struct RowCalibration {
  Matrix conditional;  // N x N, row i holds P(j|i), zero diagonal
  std::vector<double> sigmas;
  std::vector<double> perplexities;
};

/// Squared Euclidean distances between rows of `x`.
Matrix pairwise_sq_distances(const Matrix& x);

/// Throws CalibrationFailed carrying the index of the first failing row.
RowCalibration calibrate_rows(const Matrix& sq_distances, double perplexity);

/// KL gradient w.r.t. `y` for affinities `p` scaled by `exaggeration`.
/// Writes into `grad` (resized to match `y`) and returns the Student-t
/// normalizer sum_{k != l} (1 + |y_k - y_l|^2)^-1.
double tsne_gradient(const Matrix& p, const Matrix& y, double exaggeration, Matrix& grad);

/// KL(P || Q(y)) with both distributions floored at kProbabilityFloor.
double kl_divergence(const Matrix& p, const Matrix& y);

/// Indices j (ascending, self included) with |x_i - x_j| <= eps, per row i.
std::vector<std::vector<std::size_t>> radius_neighbors(const Matrix& points, double eps);

/// Runtime thread count used by the parallel kernels (omp_get_max_threads).
int max_threads();
/// Sets the OpenMP thread count; values < 1 leave the runtime default.
void set_threads(int threads);

namespace serial {

Matrix pairwise_sq_distances(const Matrix& x);
RowCalibration calibrate_rows(const Matrix& sq_distances, double perplexity);
double tsne_gradient(const Matrix& p, const Matrix& y, double exaggeration, Matrix& grad);
double kl_divergence(const Matrix& p, const Matrix& y);
std::vector<std::vector<std::size_t>> radius_neighbors(const Matrix& points, double eps);

}  // namespace serial

}  // namespace sdg::kernels
