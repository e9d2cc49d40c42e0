#include <doctest.h>

#include <cmath>
#include <vector>

#include "clsm/competition.hpp"
#include "clsm/dataset.hpp"
#include "clsm/neighbors.hpp"
#include "clsm/reference.hpp"
#include "clsm/rng.hpp"

using namespace clsm;

namespace {

SquaredErrorMatrix random_se(std::size_t s, std::size_t q, Rng& rng) {
  SquaredErrorMatrix se;
  se.se = Matrix(s, q);
  for (double& v : se.se.data) v = rng.uniform(0.0, 4.0);
  return se;
}

}  // namespace

TEST_CASE("two-model weights by hand: se=(0.01,0.04), kappa=1") {
  SquaredErrorMatrix se;
  se.se = Matrix(1, 2);
  se.se(0, 0) = 0.01;
  se.se(0, 1) = 0.04;
  CompetitionConfig cfg;
  cfg.kappa = 1.0;
  const Matrix alpha = compute_raw_weights(se, cfg);
  // c = 0.01, exponents -1 and -4.
  const double e1 = std::exp(-1.0), e4 = std::exp(-4.0);
  CHECK(alpha(0, 0) == doctest::Approx(e1 / (e1 + e4)).epsilon(1e-12));
  CHECK(alpha(0, 1) == doctest::Approx(e4 / (e1 + e4)).epsilon(1e-12));
  CHECK(alpha(0, 0) == doctest::Approx(0.95257).epsilon(1e-4));
}

TEST_CASE("rows are stochastic and the best model dominates") {
  Rng rng(101);
  CompetitionConfig cfg;
  cfg.kappa = 5.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t q = 2 + rng.next_u64() % 4;
    const SquaredErrorMatrix se = random_se(3, q, rng);
    const Matrix alpha = compute_raw_weights(se, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      double sum = 0.0;
      std::size_t best = 0;
      for (std::size_t k = 0; k < q; ++k) {
        REQUIRE(alpha(i, k) >= 0.0);
        sum += alpha(i, k);
        if (se.se(i, k) < se.se(i, best)) best = k;
      }
      REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t k = 0; k < q; ++k)
        REQUIRE(alpha(i, best) >= alpha(i, k));
    }
  }
}

TEST_CASE("raw weights agree with the reference implementation") {
  Rng rng(7);
  CompetitionConfig cfg;
  for (double kappa : {0.5, 1.0, 5.0, 20.0}) {
    cfg.kappa = kappa;
    const SquaredErrorMatrix se = random_se(40, 3, rng);
    const Matrix a = compute_raw_weights(se, cfg);
    const Matrix b = ref::raw_weights(se.se, kappa, cfg.c_floor);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t k = 0; k < a.cols; ++k)
        CHECK(a(i, k) == doctest::Approx(b(i, k)).epsilon(1e-12));
  }
}

TEST_CASE("kappa limits: uniform at 0, one-hot as kappa grows") {
  Rng rng(23);
  const SquaredErrorMatrix se = random_se(20, 4, rng);
  CompetitionConfig cfg;

  cfg.kappa = 0.0;
  const Matrix uniform = compute_raw_weights(se, cfg);
  for (double v : uniform.data) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));

  cfg.kappa = 1e6;
  const Matrix hot = compute_raw_weights(se, cfg);
  for (std::size_t i = 0; i < hot.rows; ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < 4; ++k)
      if (se.se(i, k) < se.se(i, best)) best = k;
    CHECK(hot(i, best) >= 1.0 - 1e-6);
  }
}

TEST_CASE("large kappa does not underflow to an all-zero row") {
  SquaredErrorMatrix se;
  se.se = Matrix(1, 3);
  se.se(0, 0) = 1.0;
  se.se(0, 1) = 2.0;
  se.se(0, 2) = 3.0;
  CompetitionConfig cfg;
  cfg.kappa = 1e6;
  const Matrix alpha = compute_raw_weights(se, cfg);
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    REQUIRE(std::isfinite(alpha(0, k)));
    sum += alpha(0, k);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(alpha(0, 0) >= 1.0 - 1e-12);
}

TEST_CASE("a row with an exact interpolation stays well defined") {
  SquaredErrorMatrix se;
  se.se = Matrix(1, 2);
  se.se(0, 0) = 0.0;  // c falls back to the floor
  se.se(0, 1) = 1e-4;
  CompetitionConfig cfg;
  const Matrix alpha = compute_raw_weights(se, cfg);
  CHECK(std::isfinite(alpha(0, 0)));
  CHECK(alpha(0, 0) > alpha(0, 1));
  CHECK(alpha(0, 0) + alpha(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smoothing averages neighbor rows and matches the reference") {
  Rng rng(31);
  Dataset d;
  for (int i = 0; i < 50; ++i)
    d.observations.push_back({{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, 0.0});
  const NeighborIndex idx = build_neighbor_index(d, 5);

  Matrix alpha(50, 3);
  for (double& v : alpha.data) v = rng.uniform(0.0, 1.0);
  for (std::size_t i = 0; i < 50; ++i) {
    double s = alpha(i, 0) + alpha(i, 1) + alpha(i, 2);
    for (std::size_t k = 0; k < 3; ++k) alpha(i, k) /= s;
  }

  const Matrix smoothed = smooth_weights(alpha, idx);
  const Matrix expect = ref::smooth(alpha, idx);
  for (std::size_t i = 0; i < 50; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(smoothed(i, k) == doctest::Approx(expect(i, k)).epsilon(1e-14));
      sum += smoothed(i, k);
    }
    // Row-stochasticity survives averaging.
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("neighbor smoothing includes the point itself") {
  Dataset d;
  d.observations.push_back({{0.0}, 0.0});
  d.observations.push_back({{1.0}, 0.0});
  d.observations.push_back({{10.0}, 0.0});
  const NeighborIndex idx = build_neighbor_index(d, 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(idx.row(i)[0] == static_cast<int>(i));
}

TEST_CASE("combine_weights applies alpha * alpha_bar^gamma") {
  Matrix alpha(1, 2), bar(1, 2);
  alpha(0, 0) = 0.6;
  alpha(0, 1) = 0.4;
  bar(0, 0) = 0.5;
  bar(0, 1) = 0.25;

  const Matrix g2 = combine_weights(alpha, bar, 2.0);
  CHECK(g2(0, 0) == doctest::Approx(0.6 * 0.25).epsilon(1e-14));
  CHECK(g2(0, 1) == doctest::Approx(0.4 * 0.0625).epsilon(1e-14));

  // gamma = 0 falls back to the raw weights even where alpha_bar is 0.
  bar(0, 1) = 0.0;
  const Matrix g0 = combine_weights(alpha, bar, 0.0);
  CHECK(g0(0, 0) == 0.6);
  CHECK(g0(0, 1) == 0.4);
}

TEST_CASE("assign_regimes takes the argmax and breaks ties low") {
  Matrix bar(3, 3);
  bar(0, 0) = 0.2; bar(0, 1) = 0.5; bar(0, 2) = 0.3;
  bar(1, 0) = 0.4; bar(1, 1) = 0.4; bar(1, 2) = 0.2;  // tie: model 0 wins
  bar(2, 0) = 0.1; bar(2, 1) = 0.2; bar(2, 2) = 0.7;
  const std::vector<int> labels = assign_regimes(bar);
  CHECK(labels == std::vector<int>{1, 0, 2});
}

TEST_CASE("squared_errors computes per-model residual squares") {
  Matrix preds(2, 2);
  preds(0, 0) = 1.0; preds(0, 1) = 3.0;
  preds(1, 0) = -1.0; preds(1, 1) = 0.0;
  const SquaredErrorMatrix se = squared_errors(preds, {2.0, -3.0});
  CHECK(se.se(0, 0) == doctest::Approx(1.0));
  CHECK(se.se(0, 1) == doctest::Approx(1.0));
  CHECK(se.se(1, 0) == doctest::Approx(4.0));
  CHECK(se.se(1, 1) == doctest::Approx(9.0));
}

TEST_CASE("auto neighbor count is 2% of S clamped to [3, 50]") {
  CompetitionConfig cfg;
  CHECK(cfg.resolve_neighbors(100) == 3);    // ceil(2) clamps up
  CHECK(cfg.resolve_neighbors(200) == 4);
  CHECK(cfg.resolve_neighbors(1000) == 20);
  CHECK(cfg.resolve_neighbors(5000) == 50);  // cap
  cfg.n_neighbors = 7;
  CHECK(cfg.resolve_neighbors(1000) == 7);
  CHECK_THROWS(cfg.resolve_neighbors(5));    // exceeds dataset
}

TEST_CASE("knn agrees with the brute-force reference") {
  Rng rng(41);
  Dataset d;
  for (int i = 0; i < 80; ++i)
    d.observations.push_back(
        {{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)},
         0.0});
  auto [sd, params] = standardize(d);
  const NeighborIndex a = build_neighbor_index(d, 6);
  const NeighborIndex b = ref::knn_brute(sd.inputs_matrix(), 6);
  REQUIRE(a.idx.size() == b.idx.size());
  for (std::size_t i = 0; i < a.idx.size(); ++i) CHECK(a.idx[i] == b.idx[i]);
}

TEST_CASE("weighted_mse matches the reference accumulation") {
  Rng rng(43);
  std::vector<double> r(100), w(100);
  for (std::size_t i = 0; i < 100; ++i) {
    r[i] = rng.normal();
    w[i] = rng.uniform(0.0, 1.0);
  }
  CHECK(weighted_mse(r, w) == doctest::Approx(ref::weighted_mse(r, w)).epsilon(1e-14));
}
