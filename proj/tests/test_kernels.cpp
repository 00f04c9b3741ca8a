#include <doctest.h>

#include "oracles.hpp"
#include "sdg/error.hpp"
#include "sdg/kernels.hpp"
#include "sdg/tsne.hpp"

using namespace sdg;

namespace {

struct ThreadGuard {
  int saved = kernels::max_threads();
  ~ThreadGuard() { kernels::set_threads(saved); }
};

}  // namespace

// The parallel kernels promise bit-identical output to the serial reference
// for any thread count, so these compare with ==.
TEST_SUITE("kernels") {
  TEST_CASE("pairwise distances, calibration, gradient, KL and neighbours match the serial reference") {
    ThreadGuard guard;
    const Matrix x = oracle::random_matrix(120, 6, 42);
    const Matrix y = oracle::random_matrix(120, 2, 43);
    const Matrix d_ref = kernels::serial::pairwise_sq_distances(x);
    const auto cal_ref = kernels::serial::calibrate_rows(d_ref, 20.0);
    const Matrix p = tsne::symmetrize_conditionals(cal_ref.conditional);
    Matrix g_ref;
    const double z_ref = kernels::serial::tsne_gradient(p, y, 4.0, g_ref);
    const double kl_ref = kernels::serial::kl_divergence(p, y);
    const auto nb_ref = kernels::serial::radius_neighbors(y, 0.8);

    for (int threads : {1, 2, 3, 4}) {
      CAPTURE(threads);
      kernels::set_threads(threads);
      CHECK(kernels::pairwise_sq_distances(x) == d_ref);
      const auto cal = kernels::calibrate_rows(d_ref, 20.0);
      CHECK(cal.conditional == cal_ref.conditional);
      CHECK(cal.sigmas == cal_ref.sigmas);
      Matrix g;
      CHECK(kernels::tsne_gradient(p, y, 4.0, g) == z_ref);
      CHECK(g == g_ref);
      CHECK(kernels::kl_divergence(p, y) == kl_ref);
      CHECK(kernels::radius_neighbors(y, 0.8) == nb_ref);
    }
  }

  TEST_CASE("distance kernel agrees with direct evaluation") {
    const Matrix x = oracle::random_matrix(15, 3, 2);
    const Matrix d = kernels::pairwise_sq_distances(x);
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j) CHECK(d(i, j) == doctest::Approx((x.row(i) - x.row(j)).squaredNorm()).epsilon(1e-13));
    CHECK(d.diagonal().cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("calibration failure reports the first failing row") {
    Matrix x = oracle::random_matrix(8, 2, 3);
    Matrix d = kernels::pairwise_sq_distances(x);
    // Rows 2 and 5 see identical distances everywhere, so only perplexity 7 is reachable.
    for (int r : {2, 5})
      for (int j = 0; j < 8; ++j)
        if (j != r) d(r, j) = 1.0;
    try {
      kernels::calibrate_rows(d, 3.0);
      FAIL("expected CalibrationFailed");
    } catch (const CalibrationFailed& e) {
      CHECK(e.point == 2);
    }
  }

  TEST_CASE("radius neighbours include self and use the closed ball") {
    Matrix x(3, 1);
    x << 0, 1, 2.5;
    const auto nb = kernels::radius_neighbors(x, 1.0);
    CHECK(nb[0] == std::vector<std::size_t>{0, 1});
    CHECK(nb[1] == std::vector<std::size_t>{0, 1});
    CHECK(nb[2] == std::vector<std::size_t>{2});
  }
}
