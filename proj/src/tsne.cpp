#include "sdg/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sdg/error.hpp"
#include "sdg/kernels.hpp"

namespace sdg::tsne {

namespace {

struct RowEntropy {
  double perplexity;
  double sum;
};

// Row distribution for precision beta over shifted distances; fills `probs`.
RowEntropy evaluate_row(std::span<const double> shifted, double beta, std::vector<double>& probs) {
  double sum = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    probs[j] = std::exp(-beta * shifted[j]);
    sum += probs[j];
  }
  double weighted = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) weighted += shifted[j] * probs[j];
  const double entropy = std::log(sum) + beta * weighted / sum;  // nats
  for (auto& p : probs) p /= sum;
  return {std::exp(entropy), sum};
}

}  // namespace

SigmaCalibration calibrate_sigma(std::span<const double> sq_distances, double perplexity) {
  const std::size_t n = sq_distances.size();
  if (n < 1) throw CalibrationFailed(-1, "no neighbours");
  if (!(perplexity > 1.0)) throw CalibrationFailed(-1, "perplexity must exceed 1");
  for (double d : sq_distances)
    if (!std::isfinite(d) || d < 0.0) throw CalibrationFailed(-1, "non-finite or negative distance");
  // Entropy of any distribution over n outcomes is at most log n.
  if (perplexity > static_cast<double>(n) + kPerplexityTolerance)
    throw CalibrationFailed(-1, "perplexity " + std::to_string(perplexity) + " exceeds neighbour count " +
                                    std::to_string(n));

  const auto [min_it, max_it] = std::minmax_element(sq_distances.begin(), sq_distances.end());
  const double d_min = *min_it;
  std::vector<double> shifted(n);
  for (std::size_t j = 0; j < n; ++j) shifted[j] = sq_distances[j] - d_min;

  SigmaCalibration out;
  out.conditional.assign(n, 0.0);

  if (*max_it == d_min) {
    // Every neighbour equidistant: uniform for any bandwidth.
    std::fill(out.conditional.begin(), out.conditional.end(), 1.0 / static_cast<double>(n));
    out.perplexity = static_cast<double>(n);
    if (std::abs(out.perplexity - perplexity) > kPerplexityTolerance)
      throw CalibrationFailed(-1, "all distances equal; only perplexity " + std::to_string(n) + " is reachable");
    out.beta = d_min > 0.0 ? 1.0 / d_min : 1.0;
    out.sigma = std::sqrt(0.5 / out.beta);
    return out;
  }

  double mean_shift = 0.0;
  for (double s : shifted) mean_shift += s;
  mean_shift /= static_cast<double>(n);

  double beta = 1.0 / mean_shift;
  double beta_lo = 0.0;
  double beta_hi = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= kMaxCalibrationIterations; ++iter) {
    const auto row = evaluate_row(shifted, beta, out.conditional);
    out.perplexity = row.perplexity;
    out.iterations = iter;
    const double diff = row.perplexity - perplexity;
    if (std::abs(diff) <= kPerplexityTolerance) {
      out.beta = beta;
      out.sigma = std::sqrt(0.5 / beta);
      return out;
    }
    if (diff > 0.0) {
      beta_lo = beta;
      beta = std::isinf(beta_hi) ? beta * 2.0 : 0.5 * (beta + beta_hi);
    } else {
      beta_hi = beta;
      beta = 0.5 * (beta + beta_lo);
    }
  }
  throw CalibrationFailed(-1, "no bandwidth reaches perplexity " + std::to_string(perplexity) + " (closest " +
                                  std::to_string(out.perplexity) + ")");
}

Matrix symmetrize_conditionals(const Matrix& conditional) {
  const Eigen::Index n = conditional.rows();
  Matrix p(n, n);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = i == j ? 0.0 : (conditional(i, j) + conditional(j, i)) * scale;

  // Find alpha with sum_{i != j} max(alpha * P_ij, floor) = 1.
  double alpha = 1.0;
  for (int iter = 0; iter < 64; ++iter) {
    double above = 0.0;
    double floored = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        if (alpha * p(i, j) >= kProbabilityFloor)
          above += p(i, j);
        else
          floored += 1.0;
      }
    const double next = (1.0 - kProbabilityFloor * floored) / above;
    if (next == alpha) break;
    alpha = next;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) p(i, j) = std::max(alpha * p(i, j), kProbabilityFloor);
  return p;
}

AffinityMatrix joint_affinities(const Matrix& x, double perplexity) {
  if (x.rows() < 4) throw InvalidArgument("t-SNE needs at least 4 points");
  if (!(perplexity < static_cast<double>(x.rows())))
    throw CalibrationFailed(-1, "perplexity must be below the point count");
  const Matrix d = kernels::pairwise_sq_distances(x);
  auto calibrated = kernels::calibrate_rows(d, perplexity);
  return {symmetrize_conditionals(calibrated.conditional), std::move(calibrated.sigmas)};
}

QMatrix q_matrix(const Matrix& y) {
  const Eigen::Index n = y.rows();
  if (n < 2) throw InvalidArgument("q_matrix needs at least 2 points");
  QMatrix out;
  out.q = Matrix::Zero(n, n);
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double k = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      out.q(i, j) = k;
      row += k;
    }
    z += row;
  }
  out.q /= z;
  out.normalizer = z;
  return out;
}

double kl_divergence(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols() || p.rows() != p.cols())
    throw ShapeMismatch("P is " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) + ", Q is " +
                        std::to_string(q.rows()) + "x" + std::to_string(q.cols()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (i == j) continue;
      const double pij = std::max(p(i, j), kProbabilityFloor);
      const double qij = std::max(q(i, j), kProbabilityFloor);
      row += pij * std::log(pij / qij);
    }
    total += row;
  }
  return total;
}

Matrix kl_gradient(const Matrix& p, const Matrix& y) {
  if (p.rows() != p.cols() || p.rows() != y.rows())
    throw ShapeMismatch("P is " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) + " for " +
                        std::to_string(y.rows()) + " points");
  Matrix grad;
  kernels::tsne_gradient(p, y, 1.0, grad);
  return grad;
}

void Schedule::validate() const {
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
  if (momentum_initial < 0.0 || momentum_initial >= 1.0 || momentum_final < 0.0 || momentum_final >= 1.0)
    throw InvalidArgument("momentum must lie in [0, 1)");
  if (!(exaggeration >= 1.0)) throw InvalidArgument("exaggeration must be >= 1");
  if (exaggeration_iterations < 0 || momentum_switch_iteration < 0)
    throw InvalidArgument("iteration thresholds must be >= 0");
  if (!(min_gain > 0.0)) throw InvalidArgument("min_gain must be positive");
  if (!(init_stddev > 0.0)) throw InvalidArgument("init_stddev must be positive");
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
}

Matrix initial_layout(Eigen::Index n, int dims, std::uint64_t seed, double stddev) {
  // Box-Muller over raw mt19937_64 output: the engine sequence is fixed by
  // the standard, std::normal_distribution is not.
  std::mt19937_64 engine(seed);
  auto uniform = [&engine] { return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53; };
  Matrix y(n, dims);
  double* data = y.data();
  const Eigen::Index count = n * dims;
  for (Eigen::Index k = 0; k < count; k += 2) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * 3.14159265358979323846 * uniform();
    data[k] = stddev * r * std::cos(theta);
    if (k + 1 < count) data[k + 1] = stddev * r * std::sin(theta);
  }
  return y;
}

Embedding run_from_affinities(const Matrix& p, int dims, std::uint64_t seed, const Schedule& schedule) {
  schedule.validate();
  if (dims != 2 && dims != 3) throw InvalidArgument("embedding dimension must be 2 or 3");
  const Eigen::Index n = p.rows();
  if (n < 4 || p.cols() != n) throw InvalidArgument("affinity matrix must be square with at least 4 points");

  Embedding out;
  out.seed = seed;
  out.y = initial_layout(n, dims, seed, schedule.init_stddev);

  Matrix grad(n, dims);
  Matrix velocity = Matrix::Zero(n, dims);
  Matrix gains = Matrix::Ones(n, dims);

  for (int iter = 0; iter < schedule.iterations; ++iter) {
    const double exaggeration = iter < schedule.exaggeration_iterations ? schedule.exaggeration : 1.0;
    const double momentum =
        iter < schedule.momentum_switch_iteration ? schedule.momentum_initial : schedule.momentum_final;
    kernels::tsne_gradient(p, out.y, exaggeration, grad);

    for (Eigen::Index i = 0; i < n; ++i)
      for (int d = 0; d < dims; ++d) {
        double gain = 1.0;
        if (schedule.adaptive_gains) {
          double& g = gains(i, d);
          g = (grad(i, d) > 0.0) != (velocity(i, d) > 0.0) ? g + 0.2 : g * 0.8;
          g = std::max(g, schedule.min_gain);
          gain = g;
        }
        velocity(i, d) = momentum * velocity(i, d) - schedule.learning_rate * gain * grad(i, d);
        out.y(i, d) += velocity(i, d);
      }

    for (int d = 0; d < dims; ++d) {
      double mean = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) mean += out.y(i, d);
      mean /= static_cast<double>(n);
      for (Eigen::Index i = 0; i < n; ++i) out.y(i, d) -= mean;
    }

    const int done = iter + 1;
    if (done % schedule.record_every == 0 || done == schedule.iterations)
      out.history.push_back({done, kernels::kl_divergence(p, out.y)});
  }
  return out;
}

Embedding run(const Matrix& x, double perplexity, int dims, std::uint64_t seed, const Schedule& schedule) {
  schedule.validate();
  if (dims != 2 && dims != 3) throw InvalidArgument("embedding dimension must be 2 or 3");
  auto affinities = joint_affinities(x, perplexity);
  return run_from_affinities(affinities.p, dims, seed, schedule);
}

}  // namespace sdg::tsne
