#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdg/types.hpp"

namespace sdg::tsne {

/// Lower bound applied to P and Q entries before logs and ratios.
inline constexpr double kProbabilityFloor = 1e-12;
/// Calibration stops once |2^H - target| is within this.
inline constexpr double kPerplexityTolerance = 1e-5;
inline constexpr int kMaxCalibrationIterations = 100;

struct SigmaCalibration {
  double sigma = 0.0;
  double beta = 0.0;  // 1 / (2 sigma^2)
  double perplexity = 0.0;
  int iterations = 0;
  /// P(j|i) over the supplied distances, same order.
  std::vector<double> conditional;
};

/// Bisection on the Gaussian precision of one point so that the entropy of
/// its neighbour distribution hits log2(perplexity). `sq_distances` excludes
/// the point itself. Throws CalibrationFailed (point index -1).
SigmaCalibration calibrate_sigma(std::span<const double> sq_distances, double perplexity);

/// Symmetric joint affinities P_ij = (P(j|i) + P(i|j)) / 2N.
struct AffinityMatrix {
  Matrix p;  // zero diagonal, off-diagonal >= kProbabilityFloor, sums to 1
  std::vector<double> sigmas;
};

AffinityMatrix joint_affinities(const Matrix& x, double perplexity);

/// Symmetrizes already-calibrated conditionals and applies the floor while
/// keeping the total mass at one.
Matrix symmetrize_conditionals(const Matrix& conditional);

struct QMatrix {
  Matrix q;
  double normalizer = 0.0;  // sum_{k != l} (1 + |y_k - y_l|^2)^-1
};

QMatrix q_matrix(const Matrix& y);

/// sum_{i != j} P_ij log(P_ij / Q_ij). Throws ShapeMismatch.
double kl_divergence(const Matrix& p, const Matrix& q);

/// Analytic gradient of KL(P || Q(y)) with respect to y.
Matrix kl_gradient(const Matrix& p, const Matrix& y);

/// Gradient-descent schedule. Defaults follow the common exact t-SNE setup.
struct Schedule {
  int iterations = 1000;
  double learning_rate = 200.0;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  int momentum_switch_iteration = 250;
  double exaggeration = 12.0;
  int exaggeration_iterations = 250;
  /// Delta-bar-delta per-coordinate gains.
  bool adaptive_gains = true;
  double min_gain = 0.01;
  double init_stddev = 1e-4;
  int record_every = 50;

  void validate() const;
};

struct KlRecord {
  int iteration = 0;
  double kl = 0.0;
};

struct Embedding {
  Matrix y;  // N x dims
  std::uint64_t seed = 0;
  std::vector<KlRecord> history;
};

/// Zero-mean Gaussian start, reproducible for a seed on every platform.
Matrix initial_layout(Eigen::Index n, int dims, std::uint64_t seed, double stddev);

/// Exact O(N^2) t-SNE of the rows of `x` into `dims` (2 or 3) dimensions.
Embedding run(const Matrix& x, double perplexity, int dims, std::uint64_t seed, const Schedule& schedule = {});

/// Same, starting from precomputed affinities.
Embedding run_from_affinities(const Matrix& p, int dims, std::uint64_t seed, const Schedule& schedule = {});

}  // namespace sdg::tsne
