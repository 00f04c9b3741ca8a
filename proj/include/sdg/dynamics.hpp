#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sdg/ingest.hpp"
#include "sdg/types.hpp"

namespace sdg::dynamics {

/// Euclidean norm of (1 - score/100) over the 17 goals, in [0, sqrt(17)].
double distance_to_ideal(const ScoreVector& scores);

/// distance_to_ideal for every observation, in panel order.
std::vector<double> distance_series(const ScorePanel& panel);

struct GaussianFit {
  double mean = 0.0;
  double std = 0.0;  // population (maximum-likelihood) standard deviation
  int cluster = 0;
  int year = 0;
  std::size_t members = 0;
  bool degenerate = false;  // no spread among members
};

struct DistanceDistribution {
  GaussianFit fit;
  std::vector<std::string> countries;
  std::vector<double> distances;
};

/// Country -> cluster as produced by dbscan::final_membership.
using Membership = std::map<std::string, int>;

/// Throws TooFewMembers when fewer than two member countries have data that year.
DistanceDistribution cluster_distance_distribution(const ScorePanel& panel, const Membership& membership, int cluster,
                                                   int year);

/// Least-squares r(t) = a + b t + c t^2 in raw calendar years.
struct TrajectoryFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms = 0.0;
  std::set<int> excluded_years;
  std::vector<int> fitted_years;
  std::optional<double> root;  // zero crossing used for attainment_year
  std::optional<int> attainment_year;

  double operator()(double t) const { return a + b * t + c * t * t; }
};

/// Years excluded by default: the pandemic years.
std::set<int> default_excluded_years();

/// Needs at least 4 non-excluded points; throws SingularFit. Solved by
/// Householder QR on a centred and scaled year basis, then mapped back.
TrajectoryFit fit_trajectory(const std::map<int, double>& mean_distance_by_year, const std::set<int>& excluded);

/// |c| below this falls back to the linear root.
inline constexpr double kLinearThreshold = 1e-15;

/// Smallest real root of a + b t + c t^2 strictly after `after`.
std::optional<double> zero_crossing(double a, double b, double c, double after);

enum class RootRounding {
  /// First whole year at or after the crossing, when the fitted distance is
  /// no longer positive.
  Ceil,
  Nearest,
};

std::optional<int> attainment_year(double a, double b, double c, int last_data_year,
                                   RootRounding rounding = RootRounding::Ceil);
std::optional<int> attainment_year(const TrajectoryFit& fit, int last_data_year,
                                   RootRounding rounding = RootRounding::Ceil);

/// Year -> mean distance of the cluster's member countries. Throws
/// EmptyCluster if some panel year has no member.
std::map<int, double> displacement_curve(const ScorePanel& panel, const Membership& membership, int cluster);
std::map<int, double> displacement_curve(const ScorePanel& panel, std::span<const int> labels, int cluster);

}  // namespace sdg::dynamics
