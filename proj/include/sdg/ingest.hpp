#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdg/types.hpp"

namespace sdg {

/// Scores of one country in one year. Missing goals are NaN until the panel
/// has been through filter_complete.
struct Observation {
  std::string country;
  int year = 0;
  ScoreVector scores{};

  bool complete() const;
  ObservationKey key() const { return {country, year}; }
};

/// Country x year x goal panel. Observations are kept sorted by (country, year),
/// so everything derived from a panel is independent of input row order.
class ScorePanel {
 public:
  ScorePanel() = default;
  /// Throws DuplicateObservation.
  explicit ScorePanel(std::vector<Observation> observations);

  const std::vector<Observation>& observations() const { return observations_; }
  const std::vector<std::string>& countries() const { return countries_; }
  const std::vector<int>& years() const { return years_; }
  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }

  /// Every country has every year and no goal is missing.
  bool is_complete() const;

  /// n x 17 score matrix in observation order.
  Matrix scores() const;
  std::vector<ObservationKey> keys() const;
  std::optional<std::size_t> find(const std::string& country, int year) const;

 private:
  std::vector<Observation> observations_;
  std::vector<std::string> countries_;
  std::vector<int> years_;
};

struct GoalMoments {
  double mean = 0.0;
  double stddev = 1.0;
};

/// z-scores aligned with the keys of the panel that produced them.
struct StandardizedPanel {
  std::vector<ObservationKey> keys;
  Matrix z;  // n x 17
  /// Pooled moments per goal. For within-cluster standardization these are
  /// the moments of the first group and `group_moments` carries all of them.
  std::vector<GoalMoments> moments;
  std::map<int, std::vector<GoalMoments>> group_moments;

  std::size_t size() const { return keys.size(); }
  /// Inverse transform with the global moments.
  Matrix destandardize() const;
};

/// Column layout of a panel CSV. Defaults: country,year,goal01..goal17.
struct PanelFormat {
  std::string country_column = "country";
  std::string year_column = "year";
  std::vector<std::string> goal_columns = default_goal_columns();
  int min_year = 2000;
  int max_year = 2022;

  static std::vector<std::string> default_goal_columns();
};

/// Scores are clamped into [0, 100] when outside by at most this much.
inline constexpr double kScoreClampTolerance = 1e-6;

ScorePanel load_panel(const std::filesystem::path& path, const PanelFormat& format = {});

/// Keeps countries with a finite score for all goals in all panel years.
/// Throws EmptyResult when none survive.
ScorePanel filter_complete(const ScorePanel& panel);

/// z = (x - mean_g) / sd_g with moments pooled over all countries and years.
/// Standard deviation uses the population (1/n) normalization.
StandardizedPanel standardize(const ScorePanel& panel);

/// Same transform with moments pooled inside each label group; -1 is a group
/// of its own. `labels` is aligned with panel.observations().
StandardizedPanel standardize_within_cluster(const ScorePanel& panel, std::span<const int> labels);

/// Applies stored moments to an arbitrary score vector.
Vector standardize_scores(const ScoreVector& scores, const std::vector<GoalMoments>& moments);

struct YearlyGoalMeans {
  std::vector<int> years;
  Matrix means;  // years x 17
};

YearlyGoalMeans yearly_goal_means(const ScorePanel& panel);

/// Country -> GDP per capita (USD). Reporting only.
using GdpTable = std::map<std::string, double>;

/// CSV with columns country,gdp_per_capita. Empty cells are skipped; a
/// non-positive value is an error.
GdpTable load_gdp(const std::filesystem::path& path);

}  // namespace sdg
