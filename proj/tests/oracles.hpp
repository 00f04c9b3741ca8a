#pragma once

// Brute-force reference computations used only by the tests. None of these
// call into the library, so agreement with it means something.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat random_matrix(int rows, int cols, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

// Two-pass sample covariance, n - 1 denominator.
inline Mat covariance(const Mat& x) {
  const Vec mean = x.colwise().mean().transpose();
  Mat c = Mat::Zero(x.cols(), x.cols());
  for (Eigen::Index a = 0; a < x.cols(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) s += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
      c(a, b) = s / static_cast<double>(x.rows() - 1);
    }
  return c;
}

inline Mat correlation(const Mat& x) {
  const Mat c = covariance(x);
  Mat r(c.rows(), c.cols());
  for (Eigen::Index a = 0; a < c.rows(); ++a)
    for (Eigen::Index b = 0; b < c.cols(); ++b) r(a, b) = c(a, b) / std::sqrt(c(a, a) * c(b, b));
  return r;
}

struct Eigen_ {
  Vec values;   // descending
  Mat vectors;  // columns
};

// Cyclic Jacobi rotations on a symmetric matrix.
inline Eigen_ jacobi_eigen(Mat a) {
  const Eigen::Index n = a.rows();
  Mat v = Mat::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });
  Eigen_ out{Vec(n), Mat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Sine of the largest principal angle between the row spaces of a (k x m)
// and b (k x m), both with orthonormal rows.
inline double max_principal_sine(const Mat& a, const Mat& b) {
  const Mat residual = b.transpose() - a.transpose() * (a * b.transpose());
  Eigen::JacobiSVD<Mat> svd(residual);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

// Entropy-based perplexity of a (normalised) probability row.
inline double perplexity_of(const std::vector<double>& row) {
  double h = 0.0;
  for (double p : row)
    if (p > 0.0) h -= p * std::log2(p);
  return std::exp2(h);
}

inline std::vector<double> gaussian_row(const std::vector<double>& sq, double sigma) {
  std::vector<double> p(sq.size());
  double z = 0.0;
  const double dmin = *std::min_element(sq.begin(), sq.end());
  for (std::size_t j = 0; j < sq.size(); ++j) z += p[j] = std::exp(-(sq[j] - dmin) / (2 * sigma * sigma));
  for (double& v : p) v /= z;
  return p;
}

// Scalar bisection over log sigma: perplexity increases with sigma.
inline double bisect_sigma(const std::vector<double>& sq, double target) {
  double lo = -30.0, hi = 30.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (perplexity_of(gaussian_row(sq, std::exp(mid))) < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

// KL(P || Q(y)) straight from the definitions, with the 1e-12 floor.
inline double kl_of_layout(const Mat& p, const Mat& y) {
  const Eigen::Index n = y.rows();
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) z += 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = std::max(1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm()) / z, 1e-12);
      const double pij = std::max(p(i, j), 1e-12);
      kl += pij * std::log(pij / q);
    }
  return kl;
}

inline Mat finite_difference_gradient(const std::function<double(const Mat&)>& f, const Mat& y, double h = 1e-5) {
  Mat g(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index d = 0; d < y.cols(); ++d) {
      Mat a = y, b = y;
      a(i, d) += h;
      b(i, d) -= h;
      g(i, d) = (f(a) - f(b)) / (2 * h);
    }
  return g;
}

// DBSCAN by definition: core flags from closed balls, clusters as the
// transitive closure of the core-core eps relation (Warshall), border points
// given to the lowest cluster id among adjacent cores. Ids are numbered by
// the smallest core index in each component.
inline std::vector<int> dbscan(const Mat& x, double eps, int min_pts) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<char> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      adj[i][j] = (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).norm() <= eps;
      count += adj[i][j];
    }
    core[i] = count >= min_pts;
  }
  // Rows packed into 64-bit words so the closure stays cheap at a few hundred points.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> reach(n, std::vector<std::uint64_t>(words, 0));
  auto has = [&](std::size_t i, std::size_t j) { return (reach[i][j / 64] >> (j % 64)) & 1u; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (core[i] && core[j] && adj[i][j]) reach[i][j / 64] |= std::uint64_t{1} << (j % 64);
  for (std::size_t k = 0; k < n; ++k)
    if (core[k])
      for (std::size_t i = 0; i < n; ++i)
        if (has(i, k))
          for (std::size_t w = 0; w < words; ++w) reach[i][w] |= reach[k][w];
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || label[i] != -1) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (has(i, j)) label[j] = next;
    ++next;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    int best = -1;
    for (std::size_t j = 0; j < n; ++j)
      if (core[j] && adj[i][j] && (best == -1 || label[j] < best)) best = label[j];
    label[i] = best;
  }
  return label;
}

// Same partition up to renaming (noise must map to noise).
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] == -1) != (b[i] == -1)) return false;
    auto [it, fresh] = ab.emplace(a[i], b[i]);
    if (!fresh && it->second != b[i]) return false;
    auto [jt, fresh2] = ba.emplace(b[i], a[i]);
    if (!fresh2 && jt->second != a[i]) return false;
  }
  return true;
}

// ARI from the contingency table, written out longhand.
inline double ari(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  auto c2 = [](double v) { return v * (v - 1) / 2; };
  double idx = 0, sa = 0, sb = 0;
  for (const auto& [k, v] : table) idx += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<double>(a.size()));
  const double max = 0.5 * (sa + sb);
  if (max == expected) return 1.0;
  return (idx - expected) / (max - expected);
}

// Two Gaussian blobs of `per` points in `m` dimensions, centres 20 apart.
inline Mat two_blobs(int per, int m, std::uint64_t seed) {
  Mat x = random_matrix(2 * per, m, seed);
  for (int i = per; i < 2 * per; ++i) x(i, 0) += 20.0;
  return x;
}

}  // namespace oracle
