#include "sdg/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "sdg/error.hpp"

namespace sdg::pca {

namespace {

Eigen::Index argmax_abs(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  return best;
}

std::string feature_label(Eigen::Index feature) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "goal%02d", static_cast<int>(feature + 1));
  return buf;
}

}  // namespace

PcaModel fit(const Matrix& x, int k) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  if (k < 1 || k > m) throw InvalidArgument("component count " + std::to_string(k) + " outside 1.." + std::to_string(m));
  if (n <= k) throw InvalidArgument("need more observations (" + std::to_string(n) + ") than components (" +
                                    std::to_string(k) + ")");
  if (!x.allFinite()) throw InvalidArgument("PCA input contains non-finite values");

  PcaModel model;
  model.center = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - model.center.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw RankDeficient(k, 0);
  const Vector values = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  model.total_variance = cov.trace();
  const double zero_level = 1e-12 * std::max(model.total_variance, std::numeric_limits<double>::min());
  const int available = static_cast<int>((values.array() > zero_level).count());
  if (available < k) throw RankDeficient(k, available);

  // Orient, then order: descending eigenvalue, near-ties by argmax feature.
  struct Direction {
    double value;
    Vector vector;
    Eigen::Index pivot;
  };
  std::vector<Direction> dirs;
  for (Eigen::Index c = m - 1; c >= 0; --c) {
    Vector v = vectors.col(c);
    const auto pivot = argmax_abs(v);
    if (v[pivot] < 0.0) v = -v;
    dirs.push_back({values[c], std::move(v), pivot});
  }
  std::stable_sort(dirs.begin(), dirs.end(), [](const Direction& a, const Direction& b) {
    if (std::abs(a.value - b.value) >= kDegenerateGap) return a.value > b.value;
    return a.pivot < b.pivot;
  });

  model.components.resize(k, m);
  model.explained_variance.resize(k);
  for (int c = 0; c < k; ++c) {
    model.components.row(c) = dirs[static_cast<std::size_t>(c)].vector.transpose();
    model.explained_variance[c] = dirs[static_cast<std::size_t>(c)].value;
  }
  model.explained_variance_ratio = model.explained_variance / model.total_variance;
  return model;
}

PcaModel fit(const StandardizedPanel& panel, int k) { return fit(panel.z, k); }

Matrix project(const PcaModel& model, const Matrix& x) {
  if (x.cols() != model.features()) throw DimensionMismatch(model.features(), x.cols());
  return (x.rowwise() - model.center.transpose()) * model.components.transpose();
}

Matrix project(const PcaModel& model, const StandardizedPanel& panel) { return project(model, panel.z); }

Vector project_point(const PcaModel& model, const Vector& x) {
  if (x.size() != model.features()) throw DimensionMismatch(model.features(), x.size());
  return model.components * (x - model.center);
}

Matrix reconstruct(const PcaModel& model, const Matrix& coordinates) {
  if (coordinates.cols() != model.k()) throw DimensionMismatch(model.k(), coordinates.cols());
  Matrix x = coordinates * model.components;
  x.rowwise() += model.center.transpose();
  return x;
}

std::vector<Loading> loadings(const PcaModel& model) {
  if (model.k() < 2) throw InvalidArgument("loadings need at least 2 components");
  const double s1 = std::sqrt(model.explained_variance[0]);
  const double s2 = std::sqrt(model.explained_variance[1]);
  std::vector<Loading> out;
  for (Eigen::Index g = 0; g < model.components.cols(); ++g)
    out.push_back({feature_label(g), model.components(0, g) * s1, model.components(1, g) * s2});
  return out;
}

nlohmann::json to_json(const PcaModel& model) {
  nlohmann::json j;
  j["components"] = nlohmann::json::array();
  for (Eigen::Index c = 0; c < model.components.rows(); ++c) {
    std::vector<double> row(model.components.row(c).begin(), model.components.row(c).end());
    j["components"].push_back(row);
  }
  j["explained_variance"] = std::vector<double>(model.explained_variance.begin(), model.explained_variance.end());
  j["explained_variance_ratio"] =
      std::vector<double>(model.explained_variance_ratio.begin(), model.explained_variance_ratio.end());
  j["center"] = std::vector<double>(model.center.begin(), model.center.end());
  j["total_variance"] = model.total_variance;
  return j;
}

PcaModel from_json(const nlohmann::json& j) {
  PcaModel model;
  const auto& comps = j.at("components");
  const auto k = static_cast<Eigen::Index>(comps.size());
  const auto m = k > 0 ? static_cast<Eigen::Index>(comps.at(0).size()) : 0;
  model.components.resize(k, m);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto row = comps.at(static_cast<std::size_t>(c)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != m) throw DimensionMismatch(m, static_cast<long>(row.size()));
    for (Eigen::Index g = 0; g < m; ++g) model.components(c, g) = row[static_cast<std::size_t>(g)];
  }
  auto to_vector = [](const std::vector<double>& v) { return Vector(Eigen::Map<const Vector>(v.data(), v.size())); };
  model.explained_variance = to_vector(j.at("explained_variance").get<std::vector<double>>());
  model.explained_variance_ratio = to_vector(j.at("explained_variance_ratio").get<std::vector<double>>());
  model.center = to_vector(j.at("center").get<std::vector<double>>());
  model.total_variance = j.at("total_variance").get<double>();
  if (model.explained_variance.size() != k || model.explained_variance_ratio.size() != k)
    throw DimensionMismatch(k, model.explained_variance.size());
  if (model.center.size() != m) throw DimensionMismatch(m, model.center.size());
  return model;
}

}  // namespace sdg::pca
