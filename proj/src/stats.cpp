#include "sdg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sdg/error.hpp"

namespace sdg::stats {

CorrelationMatrix pearson_matrix(const Matrix& x, std::string basis) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  if (n < 3) throw TooFewObservations(static_cast<std::size_t>(n), 3);
  if (!x.allFinite()) throw InvalidArgument("correlation input contains non-finite values");

  Vector mean = Vector::Zero(m);
  Matrix comoment = Matrix::Zero(m, m);
  Vector delta_old(m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double count = static_cast<double>(r + 1);
    delta_old = x.row(r).transpose() - mean;
    mean += delta_old / count;
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = a; b < m; ++b) comoment(a, b) += delta_old[a] * (x(r, b) - mean[b]);
  }

  for (Eigen::Index a = 0; a < m; ++a)
    if (!(comoment(a, a) > 0.0)) throw ZeroVariance(static_cast<int>(a + 1), basis);

  CorrelationMatrix out;
  out.basis = std::move(basis);
  out.observations = static_cast<std::size_t>(n);
  out.values = Matrix::Identity(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double r = comoment(a, b) / std::sqrt(comoment(a, a) * comoment(b, b));
      out.values(a, b) = out.values(b, a) = std::clamp(r, -1.0, 1.0);
    }
  return out;
}

CorrelationMatrix pearson_matrix(const ScorePanel& panel) { return pearson_matrix(panel.scores(), "global"); }

CorrelationMatrix pearson_matrix(const ScorePanel& panel, const std::map<std::string, int>& membership, int cluster) {
  std::vector<Eigen::Index> rows;
  const auto& obs = panel.observations();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    auto it = membership.find(obs[i].country);
    if (it != membership.end() && it->second == cluster) rows.push_back(static_cast<Eigen::Index>(i));
  }
  const Matrix all = panel.scores();
  Matrix subset(static_cast<Eigen::Index>(rows.size()), all.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) subset.row(static_cast<Eigen::Index>(r)) = all.row(rows[r]);
  return pearson_matrix(subset, "cluster " + std::to_string(cluster));
}

std::map<int, CorrelationMatrix> pearson_by_year(const ScorePanel& panel) {
  std::map<int, CorrelationMatrix> out;
  const Matrix all = panel.scores();
  const auto& obs = panel.observations();
  for (int year : panel.years()) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < obs.size(); ++i)
      if (obs[i].year == year) rows.push_back(static_cast<Eigen::Index>(i));
    Matrix subset(static_cast<Eigen::Index>(rows.size()), all.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) subset.row(static_cast<Eigen::Index>(r)) = all.row(rows[r]);
    out.emplace(year, pearson_matrix(subset, "year " + std::to_string(year)));
  }
  return out;
}

}  // namespace sdg::stats
