#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sdg/csv.hpp"
#include "sdg/error.hpp"
#include "sdg/ingest.hpp"
#include "test_util.hpp"

using namespace sdg;
using testutil::obs;

namespace {

std::string row(const std::string& country, int year, double fill) {
  std::string r = country + "," + std::to_string(year);
  for (int g = 0; g < 17; ++g) r += "," + csv::fixed(fill + g, 2);
  return r + "\n";
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("two countries by two years parse into four observations") {
    testutil::TempDir dir("ingest");
    testutil::write_text(dir / "p.csv", testutil::panel_header() + row("MEX", 2005, 40) + row("MEX", 2006, 41) +
                                            row("CHL", 2005, 50) + row("CHL", 2006, 51));
    const auto panel = load_panel(dir / "p.csv");
    CHECK(panel.size() == 4);
    CHECK(panel.countries() == std::vector<std::string>{"CHL", "MEX"});
    CHECK(panel.years() == std::vector<int>{2005, 2006});
    const auto i = panel.find("MEX", 2006);
    REQUIRE(i);
    CHECK(panel.observations()[*i].scores[16] == doctest::Approx(57.0));
  }

  TEST_CASE("duplicate observation is rejected") {
    testutil::TempDir dir("ingest");
    testutil::write_text(dir / "p.csv", testutil::panel_header() + row("MEX", 2005, 40) + row("MEX", 2005, 41));
    CHECK_THROWS_AS(load_panel(dir / "p.csv"), DuplicateObservation);
  }

  TEST_CASE("file and header errors") {
    testutil::TempDir dir("ingest");
    CHECK_THROWS_AS(load_panel(dir / "absent.csv"), FileNotFound);
    testutil::write_text(dir / "h.csv", "country,year,goal01\nMEX,2005,3\n");
    CHECK_THROWS_AS(load_panel(dir / "h.csv"), MalformedHeader);
  }

  TEST_CASE("non-numeric score reports row and column") {
    testutil::TempDir dir("ingest");
    std::string bad = row("MEX", 2005, 40);
    bad.replace(bad.find("43.00"), 5, "abc");
    testutil::write_text(dir / "p.csv", testutil::panel_header() + row("CHL", 2005, 40) + bad);
    try {
      load_panel(dir / "p.csv");
      FAIL("expected NonNumericScore");
    } catch (const NonNumericScore& e) {
      CHECK(e.row == 3);
      CHECK(e.column == "goal04");
    }
  }

  TEST_CASE("scores within float noise of the range are clamped, larger violations fail") {
    testutil::TempDir dir("ingest");
    std::string r = row("MEX", 2005, 40);
    r.replace(r.find("40.00"), 5, "-0.0000004");
    testutil::write_text(dir / "ok.csv", testutil::panel_header() + r);
    CHECK(load_panel(dir / "ok.csv").observations()[0].scores[0] == 0.0);
    r = row("MEX", 2005, 40);
    r.replace(r.find("40.00"), 5, "100.5");
    testutil::write_text(dir / "bad.csv", testutil::panel_header() + r);
    CHECK_THROWS_AS(load_panel(dir / "bad.csv"), NonNumericScore);
  }

  TEST_CASE("empty cells load as missing") {
    testutil::TempDir dir("ingest");
    std::string r = row("MEX", 2005, 40);
    r.replace(r.find("53.00"), 5, "");
    testutil::write_text(dir / "p.csv", testutil::panel_header() + r);
    const auto panel = load_panel(dir / "p.csv");
    CHECK(std::isnan(panel.observations()[0].scores[13]));
    CHECK_FALSE(panel.observations()[0].complete());
  }

  TEST_CASE("filter_complete drops a country missing one goal in one year") {
    std::vector<Observation> rows;
    for (const char* c : {"A", "B", "C"})
      for (int y = 2000; y <= 2002; ++y) rows.push_back(obs(c, y, 50));
    rows[4].scores[13] = std::nan("");  // B, 2001, goal 14
    const ScorePanel panel(rows);
    const auto kept = filter_complete(panel);
    CHECK(kept.countries() == std::vector<std::string>{"A", "C"});
    CHECK(kept.size() == 6);
    CHECK(kept.is_complete());
  }

  TEST_CASE("filter_complete drops a country without every year") {
    std::vector<Observation> rows = {obs("A", 2000, 1), obs("A", 2001, 2), obs("B", 2000, 3)};
    CHECK(filter_complete(ScorePanel(rows)).countries() == std::vector<std::string>{"A"});
  }

  TEST_CASE("filter_complete is the identity on complete panels and idempotent") {
    const auto panel = testutil::random_panel(5, 2000, 2004, 3);
    const auto once = filter_complete(panel);
    CHECK(once.keys() == panel.keys());
    CHECK(filter_complete(once).keys() == once.keys());
  }

  TEST_CASE("filter_complete is independent of input row order") {
    std::vector<Observation> rows;
    for (const char* c : {"A", "B", "C", "D"})
      for (int y = 2000; y <= 2003; ++y) rows.push_back(obs(c, y, 10 + y % 7));
    rows[6].scores[2] = std::nan("");
    auto shuffled = rows;
    std::mt19937 rng(9);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(filter_complete(ScorePanel(rows)).keys() == filter_complete(ScorePanel(shuffled)).keys());
  }

  TEST_CASE("filter_complete with no survivor throws EmptyResult") {
    std::vector<Observation> rows = {obs("A", 2000, 1)};
    rows[0].scores[0] = std::nan("");
    CHECK_THROWS_AS(filter_complete(ScorePanel(rows)), EmptyResult);
  }

  TEST_CASE("pooled moments: mean 50, sd 10 maps a score of 70 to z = 2") {
    std::vector<Observation> rows = {obs("A", 2000, 40), obs("A", 2001, 60), obs("B", 2000, 40), obs("B", 2001, 60)};
    const auto z = standardize(ScorePanel(rows));
    CHECK(z.moments[0].mean == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(z.moments[0].stddev == doctest::Approx(10.0).epsilon(1e-15));
    ScoreVector s;
    s.fill(70.0);
    CHECK(standardize_scores(s, z.moments)[0] == doctest::Approx(2.0).epsilon(1e-15));
  }

  TEST_CASE("an observation at the pooled mean standardizes to zero") {
    std::vector<Observation> rows = {obs("A", 2000, 40), obs("B", 2000, 50), obs("C", 2000, 60)};
    const auto z = standardize(ScorePanel(rows));
    CHECK(z.z.row(1).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("a constant goal column raises ZeroVariance") {
    std::vector<Observation> rows = {obs("A", 2000, 40), obs("B", 2000, 50)};
    rows[0].scores[6] = rows[1].scores[6] = 33.0;
    try {
      standardize(ScorePanel(rows));
      FAIL("expected ZeroVariance");
    } catch (const ZeroVariance& e) {
      CHECK(e.goal == 7);
    }
  }

  TEST_CASE("standardized columns have zero mean and unit population sd; inversion round-trips") {
    const auto panel = testutil::random_panel(7, 2000, 2010, 11);
    const auto z = standardize(panel);
    for (int g = 0; g < 17; ++g) {
      const double m = z.z.col(g).mean();
      const double s = std::sqrt((z.z.col(g).array() - m).square().mean());
      CHECK(std::abs(m) < 1e-9);
      CHECK(std::abs(s - 1.0) < 1e-9);
    }
    const Matrix back = z.destandardize();
    const Matrix x = panel.scores();
    CHECK(((back - x).array().abs() / x.array().abs()).maxCoeff() < 1e-9);
  }

  TEST_CASE("within-cluster standardization with a single cluster equals global standardization") {
    const auto panel = testutil::random_panel(4, 2000, 2005, 5);
    const std::vector<int> labels(panel.size(), 0);
    const auto a = standardize(panel);
    const auto b = standardize_within_cluster(panel, labels);
    CHECK((a.z - b.z).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("within-cluster standardization uses hand-computed group moments") {
    // Cluster 0: goal values 10, 20, 30 ; cluster 1: 70, 90 ; noise: 5, 15.
    const std::vector<double> v = {10, 20, 30, 70, 90, 5, 15};
    const std::vector<int> labels = {0, 0, 0, 1, 1, -1, -1};
    std::vector<Observation> rows;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto o = obs("C" + std::to_string(i), 2000, v[i]);
      for (int g = 1; g < 17; ++g) o.scores[g] = v[i] + g;
      rows.push_back(o);
    }
    const auto z = standardize_within_cluster(ScorePanel(rows), labels);
    const double s0 = std::sqrt(200.0 / 3.0);
    CHECK(z.z(0, 0) == doctest::Approx(-10.0 / s0).epsilon(1e-14));
    CHECK(z.z(1, 0) == doctest::Approx(0.0));
    CHECK(z.z(3, 0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(z.z(4, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(z.z(5, 0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(z.group_moments.at(1)[0].mean == doctest::Approx(80.0));
  }

  TEST_CASE("within-cluster zero variance names the cluster") {
    std::vector<Observation> rows = {obs("A", 2000, 40), obs("B", 2000, 40), obs("C", 2000, 50), obs("D", 2000, 60)};
    const std::vector<int> labels = {0, 0, 1, 1};
    CHECK_THROWS_AS(standardize_within_cluster(ScorePanel(rows), labels), ZeroVariance);
  }

  TEST_CASE("yearly means: a single country is returned verbatim") {
    std::vector<Observation> rows = {obs("A", 2000, 12.5), obs("A", 2001, 13.5)};
    const auto m = yearly_goal_means(ScorePanel(rows));
    CHECK(m.years == std::vector<int>{2000, 2001});
    CHECK(m.means(1, 16) == 13.5);
  }

  TEST_CASE("yearly means are invariant to row order") {
    const auto panel = testutil::random_panel(6, 2000, 2003, 21);
    auto rows = panel.observations();
    std::reverse(rows.begin(), rows.end());
    const auto a = yearly_goal_means(panel);
    const auto b = yearly_goal_means(filter_complete(ScorePanel(rows)));
    CHECK((a.means - b.means).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("GDP table skips blanks and rejects non-positive values") {
    testutil::TempDir dir("gdp");
    testutil::write_text(dir / "g.csv", "country,gdp_per_capita\nA,1000.5\nB,\n");
    const auto g = load_gdp(dir / "g.csv");
    CHECK(g.size() == 1);
    CHECK(g.at("A") == 1000.5);
    testutil::write_text(dir / "bad.csv", "country,gdp_per_capita\nA,-3\n");
    CHECK_THROWS_AS(load_gdp(dir / "bad.csv"), Error);
  }

  TEST_CASE("csv helpers") {
    CHECK(csv::fixed6(-0.0000001) == "0.000000");
    CHECK(csv::fixed6(1.5) == "1.500000");
    bool missing = false;
    CHECK_FALSE(csv::parse_double("NA", missing));
    CHECK(missing);
    CHECK_FALSE(csv::parse_double("1.5x", missing));
    CHECK_FALSE(missing);
    CHECK(*csv::parse_double(" 2.25 ", missing) == 2.25);
  }
}
