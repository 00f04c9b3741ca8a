#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdg/types.hpp"

namespace sdg::dbscan {

struct ClusterLabels {
  std::vector<int> labels;  // -1 noise, clusters 0..C-1 without gaps
  std::vector<bool> core;
  double eps = 0.0;
  int min_pts = 5;

  int cluster_count() const;
  std::size_t noise_count() const;
};

inline constexpr int kDefaultMinPts = 5;

/// Classic DBSCAN with Euclidean distance. A point is core when its closed
/// eps-ball holds at least `min_pts` points, itself included. Cluster ids
/// follow the input index of each cluster's first core point; a border point
/// reachable from several clusters joins the lowest id.
ClusterLabels cluster(const Matrix& points, double eps, int min_pts = kDefaultMinPts);

/// A change of label between consecutive years of one country.
struct SwitchEvent {
  std::string country;
  int from = 0;
  int to = 0;
  int year = 0;  // first year carrying `to`

  friend bool operator==(const SwitchEvent&, const SwitchEvent&) = default;
};

/// Every change point in each country's year-ordered label sequence. Noise
/// counts as a label of its own.
std::vector<SwitchEvent> detect_switches(std::span<const int> labels, std::span<const ObservationKey> keys);

/// Label of each country in its last observed year.
std::map<std::string, int> final_membership(std::span<const int> labels, std::span<const ObservationKey> keys);

struct EpsScanRow {
  double eps = 0.0;
  int n_clusters = 0;
  double noise_fraction = 0.0;
};

/// `steps` evenly spaced values from lo to hi inclusive.
std::vector<double> eps_grid(double lo, double hi, int steps);
std::vector<EpsScanRow> scan_eps(const Matrix& points, std::span<const double> grid, int min_pts = kDefaultMinPts);

/// Smallest scanned eps with at least one cluster and noise fraction at or
/// below `max_noise_fraction`.
std::optional<double> select_eps(std::span<const EpsScanRow> scan, double max_noise_fraction);

/// Chance-corrected pair agreement of two labelings (noise is an ordinary
/// label here). Identical partitions give 1 up to relabeling.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace sdg::dbscan
