#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sdg {

inline constexpr int kGoalCount = 17;

/// Dense row-major matrix; rows are observations or points.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using ScoreVector = std::array<double, kGoalCount>;

/// One of the 17 goals, numbered 1..17.
class GoalId {
 public:
  explicit GoalId(int index);

  int index() const { return index_; }
  /// Zero-based column position.
  std::size_t column() const { return static_cast<std::size_t>(index_ - 1); }
  /// "goal01" .. "goal17".
  std::string column_name() const;

  static GoalId from_column(std::size_t column) { return GoalId(static_cast<int>(column) + 1); }

  friend bool operator==(GoalId, GoalId) = default;
  friend auto operator<=>(GoalId, GoalId) = default;

 private:
  int index_;
};

/// (country, year) key of a panel row.
struct ObservationKey {
  std::string country;
  int year = 0;

  friend bool operator==(const ObservationKey&, const ObservationKey&) = default;
  friend auto operator<=>(const ObservationKey&, const ObservationKey&) = default;
};

/// Integer cluster id per observation; -1 marks noise.
inline constexpr int kNoise = -1;

}  // namespace sdg
