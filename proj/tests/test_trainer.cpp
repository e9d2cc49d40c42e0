#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "clsm/common.hpp"
#include "clsm/problems.hpp"
#include "clsm/reference.hpp"
#include "clsm/trainer.hpp"

using namespace clsm;

namespace {

Dataset noisy_line(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-2.0, 2.0);
    d.observations.push_back(
        {{x}, 1.5 * x - 0.7 + 0.3 * std::sin(x) + rng.normal(0.0, 0.05)});
  }
  return d;
}

FeatureSpec line_spec() {
  FeatureSpec spec;
  spec.terms = {var_term(0, "x"), sin_term(0, "sin(x)"), bias_term()};
  return spec;
}

EnsembleConfig sinusoid_config() {
  EnsembleConfig cfg;
  cfg.q_models = 2;
  cfg.family = ModelFamily::kLinear;
  cfg.competition.kappa = 10.0;
  cfg.competition.n_neighbors = 15;
  cfg.sparsity.lambda = 0.001;
  cfg.outer_iters = 60;
  cfg.trials = 1;
  return cfg;
}

}  // namespace

TEST_CASE("a single model collapses to the unweighted least-squares fit") {
  const Dataset d = noisy_line(31, 120);
  const FeatureMatrix fm = build_feature_library(d, line_spec());

  EnsembleConfig cfg;
  cfg.q_models = 1;
  cfg.newton.eps_max = 0.0;
  cfg.outer_iters = 30;
  const FitResult fit = fit_ensemble(d, fm, cfg, 7);

  // Normal equations solved independently.
  const std::size_t p = fm.values.cols;
  Matrix a(p, p);
  std::vector<double> b(p, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < p; ++j) {
      b[j] += fm.values(i, j) * d.observations[i].y;
      for (std::size_t k = 0; k < p; ++k)
        a(j, k) += fm.values(i, j) * fm.values(i, k);
    }
  const std::vector<double> beta = ref::gaussian_solve(a, b);
  for (std::size_t j = 0; j < p; ++j)
    CHECK(std::abs(fit.models[0].beta[j] - beta[j]) <= 1e-9);

  // With one competitor every weight is 1 and every label is 0.
  for (double v : fit.weights.alpha.data) CHECK(v == 1.0);
  for (double v : fit.weights.alpha_hat.data) CHECK(v == 1.0);
  for (int l : fit.labels) CHECK(l == 0);
  CHECK(fit.converged);
}

TEST_CASE("fit weights stay row-stochastic and labels stay in range") {
  const Dataset d = gen_piecewise_sinusoid(23);
  const FeatureMatrix fm = build_feature_library(d, sinusoid_feature_spec());
  const FitResult fit = fit_ensemble(d, fm, sinusoid_config(), 0);

  REQUIRE(fit.weights.alpha.rows == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double sum_a = 0.0, sum_ab = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      sum_a += fit.weights.alpha(i, k);
      sum_ab += fit.weights.alpha_bar(i, k);
      // alpha_bar <= 1, so damping can only shrink the raw weight.
      CHECK(fit.weights.alpha_hat(i, k) <= fit.weights.alpha(i, k) + 1e-15);
    }
    CHECK(sum_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum_ab == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.labels[i] >= 0);
    CHECK(fit.labels[i] < 2);
  }
  CHECK(fit.loss_history.size() == static_cast<std::size_t>(fit.outer_iters_run) +
                                       (fit.converged ? 0 : 1));
}

TEST_CASE("swapping the model seeds swaps the models and nothing else") {
  const Dataset d = gen_piecewise_sinusoid(23);
  const FeatureMatrix fm = build_feature_library(d, sinusoid_feature_spec());

  EnsembleConfig cfg = sinusoid_config();
  cfg.outer_iters = 25;
  cfg.model_seed_override = {401, 702};
  const FitResult ab = fit_ensemble(d, fm, cfg, 0);
  cfg.model_seed_override = {702, 401};
  const FitResult ba = fit_ensemble(d, fm, cfg, 0);

  REQUIRE(ab.models.size() == 2);
  for (std::size_t j = 0; j < ab.models[0].beta.size(); ++j) {
    CHECK(ab.models[0].beta[j] == ba.models[1].beta[j]);
    CHECK(ab.models[1].beta[j] == ba.models[0].beta[j]);
  }
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(ab.labels[i] == 1 - ba.labels[i]);
  CHECK(ab.loss_history.back() == ba.loss_history.back());
}

TEST_CASE("identical calls give bitwise identical fits") {
  const Dataset d = gen_piecewise_sinusoid(23);
  const FeatureMatrix fm = build_feature_library(d, sinusoid_feature_spec());
  EnsembleConfig cfg = sinusoid_config();
  cfg.outer_iters = 25;

  const FitResult a = fit_ensemble(d, fm, cfg, 3);
  const FitResult b = fit_ensemble(d, fm, cfg, 3);
  CHECK(a.models[0].beta == b.models[0].beta);
  CHECK(a.models[1].beta == b.models[1].beta);
  CHECK(a.labels == b.labels);
  CHECK(a.loss_history == b.loss_history);
  CHECK(a.predictions == b.predictions);

  cfg.trials = 3;
  cfg.seed = 11;
  const FitResult r1 = run_trials(d, fm, cfg);
  const FitResult r2 = run_trials(d, fm, cfg);
  CHECK(r1.trial_seed == r2.trial_seed);
  CHECK(r1.models[0].beta == r2.models[0].beta);
  CHECK(r1.loss_history == r2.loss_history);
}

TEST_CASE("run_trials keeps the trial with the lowest composite error") {
  const Dataset d = gen_piecewise_sinusoid(23);
  const FeatureMatrix fm = build_feature_library(d, sinusoid_feature_spec());
  EnsembleConfig cfg = sinusoid_config();
  cfg.outer_iters = 25;
  cfg.trials = 3;
  cfg.seed = 50;

  double best_mse = 0.0;
  std::uint64_t best_seed = 0;
  for (int t = 0; t < 3; ++t) {
    const FitResult fit = fit_ensemble(d, fm, cfg, cfg.seed + t);
    if (t == 0 || fit.loss_history.back() < best_mse) {
      best_mse = fit.loss_history.back();
      best_seed = fit.trial_seed;
    }
  }
  const FitResult best = run_trials(d, fm, cfg);
  CHECK(best.trial_seed == best_seed);
  CHECK(best.loss_history.back() == best_mse);
}

TEST_CASE("evaluating the training block reproduces the final training loss") {
  const Dataset d = gen_piecewise_sinusoid(23);
  const FeatureMatrix fm = build_feature_library(d, sinusoid_feature_spec());

  EnsembleConfig cfg = sinusoid_config();
  bool expect_converged = false;
  SUBCASE("converged fit") {
    cfg.outer_iters = 400;
    expect_converged = true;
  }
  SUBCASE("iteration-capped fit") { cfg.outer_iters = 3; }

  const FitResult fit = fit_ensemble(d, fm, cfg, 0);
  CHECK(fit.converged == expect_converged);
  const CompositeEval ev = evaluate_composite(fit, d, cfg.competition);
  CHECK(ev.mse == fit.loss_history.back());
  CHECK(ev.labels == fit.labels);
}

TEST_CASE("held-out evaluation stays close to the training composite") {
  // Same generator, fresh noise: the competitive assignment on unseen rows
  // must route well enough to stay within a small factor of training loss.
  const Dataset train = gen_piecewise_sinusoid(23);
  const Dataset held = gen_piecewise_sinusoid(24);
  const FeatureMatrix fm = build_feature_library(train, sinusoid_feature_spec());
  const FitResult fit = fit_ensemble(train, fm, sinusoid_config(), 0);
  const CompositeEval ev = evaluate_composite(fit, held, CompetitionConfig{});
  CHECK(ev.mse < 3.0 * fit.loss_history.back());
}

TEST_CASE("hard routing returns one of the specialist predictions") {
  const Dataset d = gen_piecewise_sinusoid(23);
  const FeatureMatrix fm = build_feature_library(d, sinusoid_feature_spec());
  const FitResult fit = fit_ensemble(d, fm, sinusoid_config(), 0);

  Matrix queries(9, 1);
  for (int i = 0; i < 9; ++i) queries(i, 0) = -20.0 + 5.0 * i;
  const std::vector<double> hard =
      composite_predict(fit, d, queries, PredictMode::kHard);
  const std::vector<double> soft =
      composite_predict(fit, d, queries, PredictMode::kSoft);

  for (std::size_t i = 0; i < 9; ++i) {
    std::vector<double> x = {queries(i, 0)};
    const std::vector<double> f = eval_features(fit.feature_spec, x);
    std::vector<double> yhat(2, 0.0);
    for (int k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < f.size(); ++j)
        yhat[k] += f[j] * fit.models[k].beta[j];
    const double lo = std::min(yhat[0], yhat[1]);
    const double hi = std::max(yhat[0], yhat[1]);
    const bool is_model_output = std::abs(hard[i] - yhat[0]) <= 1e-12 ||
                                 std::abs(hard[i] - yhat[1]) <= 1e-12;
    CHECK(is_model_output);
    // Soft blending is a convex combination of the specialists.
    CHECK(soft[i] >= lo - 1e-12);
    CHECK(soft[i] <= hi + 1e-12);
  }
}

TEST_CASE("config and shape violations are rejected") {
  const Dataset d = noisy_line(1, 50);
  const FeatureMatrix fm = build_feature_library(d, line_spec());

  EnsembleConfig bad;
  bad.q_models = 0;
  CHECK_THROWS_AS(fit_ensemble(d, fm, bad, 0), ConfigError);

  EnsembleConfig cfg;
  Dataset tiny;
  tiny.observations.push_back({{0.0}, 0.0});
  CHECK_THROWS_AS(fit_ensemble(tiny, fm, cfg, 0), ConfigError);

  const Dataset other = noisy_line(2, 49);  // feature rows disagree
  CHECK_THROWS_AS(fit_ensemble(other, fm, cfg, 0), ConfigError);

  cfg.model_seed_override = {1, 2, 3};  // length != q_models
  CHECK_THROWS_AS(fit_ensemble(d, fm, cfg, 0), ConfigError);

  const FitResult fit = fit_ensemble(d, fm, EnsembleConfig{}, 0);
  Matrix wide(2, 3);
  CHECK_THROWS_AS(composite_predict(fit, d, wide, PredictMode::kHard), ConfigError);
}

TEST_CASE("non-finite training data raises a training failure") {
  // A huge target drives the squared errors past the double range inside
  // the weight computation, which training reports rather than hiding.
  Dataset d = noisy_line(3, 60);
  d.observations[10].y = 1e200;
  const FeatureMatrix fm = build_feature_library(d, line_spec());
  EnsembleConfig cfg;
  cfg.q_models = 2;
  CHECK_THROWS_AS(fit_ensemble(d, fm, cfg, 0), TrainingError);
}
