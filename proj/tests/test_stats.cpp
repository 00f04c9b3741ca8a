#include <doctest.h>

#include "oracles.hpp"
#include "sdg/error.hpp"
#include "sdg/stats.hpp"
#include "test_util.hpp"

using namespace sdg;

namespace {

void check_properties(const stats::CorrelationMatrix& c) {
  const Matrix& r = c.values;
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r.diagonal().array() == 1.0).all());
  CHECK(r.maxCoeff() <= 1.0);
  CHECK(r.minCoeff() >= -1.0);
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("exact increasing linear relation gives +1, decreasing gives -1") {
    Matrix x(6, 3);
    for (int i = 0; i < 6; ++i) x.row(i) << i, 3.0 * i + 2.0, -0.5 * i + (i % 2);
    x(0, 2) = 4;
    const auto c = stats::pearson_matrix(x);
    CHECK(c.values(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    Matrix y = x;
    y.col(2) = -2.0 * x.col(0);
    CHECK(stats::pearson_matrix(y).values(0, 2) == doctest::Approx(-1.0).epsilon(1e-14));
  }

  TEST_CASE("properties and two-pass oracle agreement on random fixtures") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Matrix x = oracle::random_matrix(30 + static_cast<int>(seed), 17, seed, 10.0);
      const auto c = stats::pearson_matrix(x);
      check_properties(c);
      CHECK((c.values - oracle::correlation(x)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(c.observations == static_cast<std::size_t>(x.rows()));
    }
  }

  TEST_CASE("positive affine rescaling per goal leaves the matrix unchanged") {
    const Matrix x = oracle::random_matrix(60, 17, 4, 15.0);
    Matrix y = x;
    for (int g = 0; g < 17; ++g) y.col(g) = x.col(g) * (0.5 + g) + Vector::Constant(60, 40.0 - 3 * g);
    CHECK((stats::pearson_matrix(x).values - stats::pearson_matrix(y).values).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(stats::pearson_matrix(Matrix::Ones(2, 3)), TooFewObservations);
    Matrix x = oracle::random_matrix(10, 4, 1);
    x.col(2).setConstant(5.0);
    try {
      stats::pearson_matrix(x);
      FAIL("expected ZeroVariance");
    } catch (const ZeroVariance& e) {
      CHECK(e.goal == 3);
    }
  }

  TEST_CASE("panel overloads: global, per cluster, per year") {
    const auto panel = testutil::random_panel(6, 2000, 2004, 7);
    const auto global = stats::pearson_matrix(panel);
    CHECK(global.basis == "global");
    CHECK((global.values - oracle::correlation(panel.scores())).cwiseAbs().maxCoeff() < 1e-12);

    std::map<std::string, int> membership;
    for (std::size_t i = 0; i < panel.countries().size(); ++i) membership[panel.countries()[i]] = static_cast<int>(i % 2);
    const auto c1 = stats::pearson_matrix(panel, membership, 1);
    CHECK(c1.observations == 15);
    Matrix subset(15, 17);
    Eigen::Index r = 0;
    const Matrix all = panel.scores();
    for (std::size_t i = 0; i < panel.size(); ++i)
      if (membership.at(panel.observations()[i].country) == 1) subset.row(r++) = all.row(static_cast<Eigen::Index>(i));
    CHECK((c1.values - oracle::correlation(subset)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(stats::pearson_matrix(panel, membership, 7), TooFewObservations);

    const auto by_year = stats::pearson_by_year(panel);
    CHECK(by_year.size() == 5);
    CHECK(by_year.at(2002).observations == 6);
    check_properties(by_year.at(2002));
  }
}
