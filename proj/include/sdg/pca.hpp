#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sdg/ingest.hpp"
#include "sdg/types.hpp"

namespace sdg::pca {

/// Top-k principal directions of a sample covariance (n - 1 denominator).
/// Each component is oriented so its largest-magnitude entry is positive.
struct PcaModel {
  Matrix components;                // k x m, orthonormal rows
  Vector explained_variance;        // k eigenvalues, non-increasing
  Vector explained_variance_ratio;  // eigenvalue / total variance
  Vector center;                    // m column means of the training data
  double total_variance = 0.0;

  int k() const { return static_cast<int>(components.rows()); }
  int features() const { return static_cast<int>(components.cols()); }
};

/// Eigenvalues closer than this are ordered by the lowest feature index of
/// their largest-magnitude loading.
inline constexpr double kDegenerateGap = 1e-12;

/// Throws InvalidArgument unless rows > k >= 1 and k <= cols; RankDeficient
/// when fewer than k directions carry variance.
PcaModel fit(const Matrix& x, int k);
PcaModel fit(const StandardizedPanel& panel, int k);

/// (x - center) * components^T. Throws DimensionMismatch.
Matrix project(const PcaModel& model, const Matrix& x);
Matrix project(const PcaModel& model, const StandardizedPanel& panel);
Vector project_point(const PcaModel& model, const Vector& x);

/// Back-projection of k-dim coordinates into feature space.
Matrix reconstruct(const PcaModel& model, const Matrix& coordinates);

/// Biplot arrow of one feature in the PC1-PC2 plane.
struct Loading {
  std::string label;
  double pc1 = 0.0;  // component1[g] * sqrt(lambda1)
  double pc2 = 0.0;  // component2[g] * sqrt(lambda2)
};

/// Requires k >= 2. Labels default to goal01..goalNN.
std::vector<Loading> loadings(const PcaModel& model);

nlohmann::json to_json(const PcaModel& model);
PcaModel from_json(const nlohmann::json& j);

}  // namespace sdg::pca
