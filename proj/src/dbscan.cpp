#include "sdg/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "sdg/error.hpp"
#include "sdg/kernels.hpp"

namespace sdg::dbscan {

int ClusterLabels::cluster_count() const {
  int top = -1;
  for (int l : labels) top = std::max(top, l);
  return top + 1;
}

std::size_t ClusterLabels::noise_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

ClusterLabels cluster(const Matrix& points, double eps, int min_pts) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be a positive finite radius");
  if (min_pts < 1) throw InvalidArgument("min_pts must be >= 1");
  if (!points.allFinite()) throw InvalidArgument("DBSCAN input contains non-finite coordinates");

  const auto n = static_cast<std::size_t>(points.rows());
  const auto neighbors = kernels::radius_neighbors(points, eps);

  constexpr int kUnassigned = -2;
  ClusterLabels out;
  out.eps = eps;
  out.min_pts = min_pts;
  out.labels.assign(n, kUnassigned);
  out.core.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) out.core[i] = neighbors[i].size() >= static_cast<std::size_t>(min_pts);

  int next_id = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (out.labels[seed] != kUnassigned || !out.core[seed]) continue;
    const int id = next_id++;
    out.labels[seed] = id;
    frontier.push_back(seed);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : neighbors[p]) {
        if (out.labels[q] != kUnassigned) continue;
        out.labels[q] = id;
        if (out.core[q]) frontier.push_back(q);
      }
    }
  }
  for (auto& l : out.labels)
    if (l == kUnassigned) l = kNoise;
  return out;
}

namespace {

std::map<std::string, std::vector<std::pair<int, int>>> by_country(std::span<const int> labels,
                                                                    std::span<const ObservationKey> keys) {
  if (labels.size() != keys.size()) throw ShapeMismatch("labels and keys differ in length");
  std::map<std::string, std::vector<std::pair<int, int>>> series;
  for (std::size_t i = 0; i < keys.size(); ++i) series[keys[i].country].emplace_back(keys[i].year, labels[i]);
  for (auto& [country, s] : series) std::sort(s.begin(), s.end());
  return series;
}

}  // namespace

std::vector<SwitchEvent> detect_switches(std::span<const int> labels, std::span<const ObservationKey> keys) {
  std::vector<SwitchEvent> out;
  for (const auto& [country, s] : by_country(labels, keys))
    for (std::size_t t = 1; t < s.size(); ++t)
      if (s[t].second != s[t - 1].second) out.push_back({country, s[t - 1].second, s[t].second, s[t].first});
  return out;
}

std::map<std::string, int> final_membership(std::span<const int> labels, std::span<const ObservationKey> keys) {
  std::map<std::string, int> out;
  for (const auto& [country, s] : by_country(labels, keys)) out[country] = s.back().second;
  return out;
}

std::vector<double> eps_grid(double lo, double hi, int steps) {
  if (steps < 1 || !(lo > 0.0) || hi < lo) throw InvalidArgument("eps grid needs 0 < lo <= hi and steps >= 1");
  std::vector<double> grid;
  for (int s = 0; s < steps; ++s)
    grid.push_back(steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps - 1));
  return grid;
}

std::vector<EpsScanRow> scan_eps(const Matrix& points, std::span<const double> grid, int min_pts) {
  std::vector<EpsScanRow> out;
  const double n = static_cast<double>(points.rows());
  for (double eps : grid) {
    const auto result = cluster(points, eps, min_pts);
    out.push_back({eps, result.cluster_count(), n > 0 ? static_cast<double>(result.noise_count()) / n : 0.0});
  }
  return out;
}

std::optional<double> select_eps(std::span<const EpsScanRow> scan, double max_noise_fraction) {
  std::optional<double> best;
  for (const auto& row : scan)
    if (row.n_clusters >= 1 && row.noise_fraction <= max_noise_fraction && (!best || row.eps < *best)) best = row.eps;
  return best;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ShapeMismatch("labelings differ in length");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto pairs = [](double c) { return c * (c - 1.0) / 2.0; };
  double index = 0.0;
  for (const auto& [key, c] : joint) index += pairs(c);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (const auto& [key, c] : rows) sum_a += pairs(c);
  for (const auto& [key, c] : cols) sum_b += pairs(c);
  const double expected = sum_a * sum_b / pairs(static_cast<double>(n));
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return joint.size() == rows.size() && rows.size() == cols.size() ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace sdg::dbscan
