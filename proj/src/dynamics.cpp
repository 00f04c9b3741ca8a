#include "sdg/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "sdg/dbscan.hpp"
#include "sdg/error.hpp"

namespace sdg::dynamics {

double distance_to_ideal(const ScoreVector& scores) {
  double s = 0.0;
  for (double v : scores) {
    const double gap = 1.0 - v / 100.0;
    s += gap * gap;
  }
  return std::sqrt(s);
}

std::vector<double> distance_series(const ScorePanel& panel) {
  std::vector<double> out;
  out.reserve(panel.size());
  for (const auto& o : panel.observations()) out.push_back(distance_to_ideal(o.scores));
  return out;
}

namespace {

void reject_noise(int cluster) {
  if (cluster == kNoise) throw InvalidArgument("noise observations are not a cluster");
}

}  // namespace

DistanceDistribution cluster_distance_distribution(const ScorePanel& panel, const Membership& membership, int cluster,
                                                   int year) {
  reject_noise(cluster);
  DistanceDistribution out;
  for (const auto& o : panel.observations()) {
    if (o.year != year) continue;
    auto it = membership.find(o.country);
    if (it == membership.end() || it->second != cluster) continue;
    out.countries.push_back(o.country);
    out.distances.push_back(distance_to_ideal(o.scores));
  }
  if (out.distances.size() < 2) throw TooFewMembers(cluster, year, out.distances.size());

  const double n = static_cast<double>(out.distances.size());
  double sum = 0.0;
  for (double d : out.distances) sum += d;
  const double mean = sum / n;
  double ss = 0.0;
  for (double d : out.distances) ss += (d - mean) * (d - mean);
  out.fit = {mean, std::sqrt(ss / n), cluster, year, out.distances.size(), false};
  out.fit.degenerate = !(out.fit.std > 0.0);
  return out;
}

std::set<int> default_excluded_years() { return {2020, 2021, 2022}; }

TrajectoryFit fit_trajectory(const std::map<int, double>& mean_distance_by_year, const std::set<int>& excluded) {
  TrajectoryFit fit;
  fit.excluded_years = excluded;
  std::vector<double> values;
  for (const auto& [year, value] : mean_distance_by_year) {
    if (excluded.count(year)) continue;
    if (!std::isfinite(value)) throw SingularFit("non-finite value in year " + std::to_string(year));
    fit.fitted_years.push_back(year);
    values.push_back(value);
  }
  const auto n = static_cast<Eigen::Index>(values.size());
  if (n < 4) throw SingularFit("need at least 4 fitted years, have " + std::to_string(n));

  const double lo = fit.fitted_years.front();
  const double hi = fit.fitted_years.back();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  if (!(half > 0.0)) throw SingularFit("all fitted points share one year");

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = (fit.fitted_years[static_cast<std::size_t>(i)] - mid) / half;
    design(i, 0) = 1.0;
    design(i, 1) = s;
    design(i, 2) = s * s;
    rhs[i] = values[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw SingularFit("fewer than 3 distinct years");
  const Eigen::Vector3d coef = qr.solve(rhs);

  const Eigen::VectorXd residual = rhs - design * coef;
  fit.rms = std::sqrt(residual.squaredNorm() / static_cast<double>(n));

  // r = al + be s + ga s^2 with s = (t - mid) / half.
  const double al = coef[0];
  const double be = coef[1];
  const double ga = coef[2];
  fit.c = ga / (half * half);
  fit.b = be / half - 2.0 * ga * mid / (half * half);
  fit.a = al - be * mid / half + ga * mid * mid / (half * half);
  return fit;
}

std::optional<double> zero_crossing(double a, double b, double c, double after) {
  std::vector<double> roots;
  if (std::abs(c) < kLinearThreshold) {
    if (b == 0.0) return std::nullopt;
    roots.push_back(-a / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    roots.push_back(q / c);
    if (q != 0.0) roots.push_back(a / q);
  }
  std::optional<double> best;
  for (double r : roots)
    if (r > after && (!best || r < *best)) best = r;
  return best;
}

std::optional<int> attainment_year(double a, double b, double c, int last_data_year, RootRounding rounding) {
  const auto root = zero_crossing(a, b, c, static_cast<double>(last_data_year));
  if (!root) return std::nullopt;
  const double year = rounding == RootRounding::Ceil ? std::ceil(*root - 1e-9) : std::round(*root);
  return static_cast<int>(year);
}

std::optional<int> attainment_year(const TrajectoryFit& fit, int last_data_year, RootRounding rounding) {
  return attainment_year(fit.a, fit.b, fit.c, last_data_year, rounding);
}

std::map<int, double> displacement_curve(const ScorePanel& panel, const Membership& membership, int cluster) {
  reject_noise(cluster);
  std::map<int, std::pair<double, int>> acc;
  for (int y : panel.years()) acc[y] = {0.0, 0};
  for (const auto& o : panel.observations()) {
    auto it = membership.find(o.country);
    if (it == membership.end() || it->second != cluster) continue;
    auto& [sum, count] = acc[o.year];
    sum += distance_to_ideal(o.scores);
    ++count;
  }
  std::map<int, double> out;
  for (const auto& [year, sc] : acc) {
    if (sc.second == 0) throw EmptyCluster(cluster, year);
    out[year] = sc.first / sc.second;
  }
  return out;
}

std::map<int, double> displacement_curve(const ScorePanel& panel, std::span<const int> labels, int cluster) {
  const auto keys = panel.keys();
  return displacement_curve(panel, dbscan::final_membership(labels, keys), cluster);
}

}  // namespace sdg::dynamics
