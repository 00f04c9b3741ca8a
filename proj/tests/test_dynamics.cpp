#include <doctest.h>

#include <cmath>

#include "sdg/dynamics.hpp"
#include "sdg/error.hpp"
#include "test_util.hpp"

using namespace sdg;
using testutil::obs;

namespace {

struct Row {
  double a, b, c;
  int year;
};

// Reference trajectory coefficient rows and their years to zero.
const Row kReferenceRows[] = {
    {-2799.59, 2.80247, -0.000700922, 2048}, {-1881.52, 1.89254, -0.000475281, 2063},
    {-669.863, 0.686105, -0.000175162, 2066}, {-269.743, 0.279532, -0.000072022, 2085},
    {-2903.6, 2.90572, -0.000726443, 2054},   {-49.7872, 0.0622445, -0.00001835, 2101},
};

ScorePanel panel_with_distances(const std::map<std::string, std::vector<double>>& fills, int first) {
  std::vector<Observation> rows;
  for (const auto& [country, values] : fills)
    for (std::size_t i = 0; i < values.size(); ++i) rows.push_back(obs(country, first + static_cast<int>(i), values[i]));
  return ScorePanel(rows);
}

// Uniform score s gives distance (1 - s/100) * sqrt(17).
double fill_for(double distance) { return 100.0 * (1.0 - distance / std::sqrt(17.0)); }

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("distance to ideal examples") {
    ScoreVector s;
    s.fill(100.0);
    CHECK(dynamics::distance_to_ideal(s) == 0.0);
    s.fill(0.0);
    CHECK(dynamics::distance_to_ideal(s) == doctest::Approx(std::sqrt(17.0)).epsilon(1e-15));
    s.fill(50.0);
    CHECK(dynamics::distance_to_ideal(s) == doctest::Approx(0.5 * std::sqrt(17.0)).epsilon(1e-15));
  }

  TEST_CASE("raising any single score strictly lowers the distance") {
    ScoreVector s;
    for (int g = 0; g < 17; ++g) s[static_cast<std::size_t>(g)] = 20.0 + 4.0 * g;
    const double base = dynamics::distance_to_ideal(s);
    for (std::size_t g = 0; g < 17; ++g) {
      ScoreVector t = s;
      t[g] += 1.0;
      CHECK(dynamics::distance_to_ideal(t) < base);
    }
  }

  TEST_CASE("two-member moments: mean 1.5, population std 0.5") {
    const auto panel = panel_with_distances({{"A", {fill_for(1.0)}}, {"B", {fill_for(2.0)}}}, 2000);
    const auto d = dynamics::cluster_distance_distribution(panel, {{"A", 0}, {"B", 0}}, 0, 2000);
    CHECK(d.fit.mean == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(d.fit.std == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.fit.members == 2);
    CHECK_FALSE(d.fit.degenerate);
  }

  TEST_CASE("five hand-built members match hand-computed moments") {
    std::vector<Observation> rows;
    std::vector<double> dist;
    for (int c = 0; c < 5; ++c) {
      Observation o{"C" + std::to_string(c), 2010, {}};
      for (int g = 0; g < 17; ++g) o.scores[static_cast<std::size_t>(g)] = 10.0 + 5.0 * c + 2.0 * g;
      double sq = 0;
      for (double v : o.scores) sq += (1 - v / 100) * (1 - v / 100);
      dist.push_back(std::sqrt(sq));
      rows.push_back(o);
    }
    double mean = 0;
    for (double v : dist) mean += v / 5;
    double var = 0;
    for (double v : dist) var += (v - mean) * (v - mean) / 5;
    dynamics::Membership m;
    for (int c = 0; c < 5; ++c) m["C" + std::to_string(c)] = 3;
    const auto d = dynamics::cluster_distance_distribution(ScorePanel(rows), m, 3, 2010);
    CHECK(std::abs(d.fit.mean - mean) < 1e-12);
    CHECK(std::abs(d.fit.std - std::sqrt(var)) < 1e-12);
  }

  TEST_CASE("identical members are degenerate; a single member is too few") {
    const auto panel = panel_with_distances({{"A", {40.0}}, {"B", {40.0}}, {"C", {70.0}}}, 2000);
    const auto d = dynamics::cluster_distance_distribution(panel, {{"A", 0}, {"B", 0}, {"C", 1}}, 0, 2000);
    CHECK(d.fit.std == 0.0);
    CHECK(d.fit.degenerate);
    CHECK_THROWS_AS(dynamics::cluster_distance_distribution(panel, {{"A", 0}, {"B", 0}, {"C", 1}}, 1, 2000),
                    TooFewMembers);
  }

  TEST_CASE("constant and linear series") {
    std::map<int, double> constant, line;
    for (int y = 2000; y <= 2019; ++y) {
      constant[y] = 1.0;
      line[y] = 5.0 - 0.002 * y;
    }
    auto f = dynamics::fit_trajectory(constant, {});
    CHECK(f.a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(f.b) < 1e-9);
    CHECK(std::abs(f.c) < 1e-9);
    f = dynamics::fit_trajectory(line, {});
    CHECK(std::abs(f.c) < 1e-9);
    CHECK(f.b == doctest::Approx(-0.002).epsilon(1e-6));
    CHECK(f.rms < 1e-9);
  }

  TEST_CASE("noiseless reference series are recovered") {
    for (const auto& r : kReferenceRows) {
      std::map<int, double> series;
      for (int y = 2000; y <= 2022; ++y) series[y] = r.a + r.b * y + r.c * y * y + (y >= 2020 ? 0.3 : 0.0);
      const auto f = dynamics::fit_trajectory(series, dynamics::default_excluded_years());
      CHECK(f.fitted_years.size() == 20);
      CHECK(std::abs(f.a - r.a) / std::abs(r.a) < 1e-6);
      CHECK(std::abs(f.b - r.b) / std::abs(r.b) < 1e-6);
      CHECK(std::abs(f.c - r.c) / std::abs(r.c) < 1e-6);
    }
  }

  TEST_CASE("residuals are orthogonal to the design columns") {
    std::map<int, double> series;
    for (int y = 2000; y <= 2019; ++y) series[y] = 1.8 - 0.01 * (y - 2000) + 0.05 * std::sin(y * 1.3);
    const auto f = dynamics::fit_trajectory(series, {});
    double s0 = 0, s1 = 0, s2 = 0, n0 = 0, n1 = 0, n2 = 0;
    for (const auto& [y, v] : series) {
      const double e = v - f(y), t = y;
      s0 += e, s1 += e * t, s2 += e * t * t;
      n0 += std::abs(v), n1 += std::abs(v * t), n2 += std::abs(v * t * t);
    }
    CHECK(std::abs(s0) / n0 < 1e-9);
    CHECK(std::abs(s1) / n1 < 1e-9);
    CHECK(std::abs(s2) / n2 < 1e-9);
  }

  TEST_CASE("too few fitted years is singular") {
    std::map<int, double> s = {{2000, 1}, {2001, 2}, {2002, 3}, {2020, 4}};
    CHECK_THROWS_AS(dynamics::fit_trajectory(s, dynamics::default_excluded_years()), SingularFit);
  }

  TEST_CASE("attainment year: linear root and the two outer reference rows") {
    CHECK(dynamics::attainment_year(-2030, 1, 0, 2022) == 2030);
    CHECK(dynamics::attainment_year(-2799.59, 2.80247, -0.000700922, 2022) == 2048);
    CHECK(dynamics::attainment_year(-49.7872, 0.0622445, -0.00001835, 2022) == 2101);
    CHECK_FALSE(dynamics::attainment_year(1, 0, 0, 2022));
    // Upward parabola with its minimum above zero never attains.
    CHECK_FALSE(dynamics::attainment_year(1, 0, 1e-6, 2022));
    // Root already in the past.
    CHECK_FALSE(dynamics::attainment_year(-2010, 1, 0, 2022));
  }

  TEST_CASE("attainment year exceeds the last fitted year and respects the rounding mode") {
    for (const auto& r : kReferenceRows) {
      const auto y = dynamics::attainment_year(r.a, r.b, r.c, 2019);
      REQUIRE(y);
      CHECK(*y > 2019);
      const auto root = dynamics::zero_crossing(r.a, r.b, r.c, 2019);
      REQUIRE(root);
      CHECK(std::abs(r.a + r.b * *root + r.c * *root * *root) < 1e-6);
      CHECK(*dynamics::attainment_year(r.a, r.b, r.c, 2019, dynamics::RootRounding::Nearest) ==
            static_cast<int>(std::lround(*root)));
    }
  }

  TEST_CASE("displacement curves") {
    const auto one = panel_with_distances({{"A", {fill_for(1.0), fill_for(0.9), fill_for(0.8)}}}, 2000);
    auto curve = dynamics::displacement_curve(one, {{"A", 2}}, 2);
    CHECK(curve.at(2001) == doctest::Approx(0.9).epsilon(1e-12));

    const auto mirrored = panel_with_distances(
        {{"A", {fill_for(1.5), fill_for(1.0)}}, {"B", {fill_for(2.5), fill_for(3.0)}}}, 2000);
    curve = dynamics::displacement_curve(mirrored, {{"A", 0}, {"B", 0}}, 0);
    CHECK(curve.at(2000) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(curve.at(2001) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("five-country curve equals column means of the distance matrix") {
    const auto panel = testutil::random_panel(5, 2000, 2006, 13);
    dynamics::Membership m;
    for (const auto& c : panel.countries()) m[c] = 1;
    const auto curve = dynamics::displacement_curve(panel, m, 1);
    const auto d = dynamics::distance_series(panel);
    for (int y = 2000; y <= 2006; ++y) {
      double mean = 0;
      for (std::size_t i = 0; i < panel.size(); ++i)
        if (panel.observations()[i].year == y) mean += d[i] / 5;
      CHECK(std::abs(curve.at(y) - mean) < 1e-12);
    }
  }

  TEST_CASE("label-based curves use final-year membership and reject noise and empty years") {
    const auto panel = testutil::random_panel(2, 2000, 2002, 3);
    // C100 ends in cluster 0; C101 ends as noise.
    const std::vector<int> labels = {1, 1, 0, 0, 0, -1};
    const auto curve = dynamics::displacement_curve(panel, labels, 0);
    const auto d = dynamics::distance_series(panel);
    CHECK(curve.at(2000) == d[0]);
    CHECK_THROWS(dynamics::displacement_curve(panel, labels, -1));

    std::vector<Observation> rows = {obs("A", 2000, 50), obs("A", 2001, 50), obs("B", 2001, 60)};
    CHECK_THROWS_AS(dynamics::displacement_curve(ScorePanel(rows), {{"A", 0}, {"B", 1}}, 1), EmptyCluster);
  }
}
