#include "clsm/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "clsm/common.hpp"
#include "clsm/neighbors.hpp"
#include "clsm/rng.hpp"

namespace clsm {

namespace {

double inf_norm(const std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

void check_finite(const WeightedLossReport& rep, int model) {
  if (!std::isfinite(rep.loss))
    throw TrainingError("model " + std::to_string(model) + ": non-finite loss");
  for (double g : rep.grad)
    if (!std::isfinite(g))
      throw TrainingError("model " + std::to_string(model) + ": non-finite gradient");
}

std::vector<double> weight_column(const Matrix& m, int k) {
  std::vector<double> w(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) w[i] = m(i, static_cast<std::size_t>(k));
  return w;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (q_models < 1) throw ConfigError("ensemble: q_models must be >= 1");
  if (trials < 1) throw ConfigError("ensemble: trials must be >= 1");
  if (outer_iters < 1) throw ConfigError("ensemble: outer_iters must be >= 1");
  if (inner_steps < 0) throw ConfigError("ensemble: inner_steps must be >= 0");
  if (!model_seed_override.empty() &&
      model_seed_override.size() != static_cast<std::size_t>(q_models))
    throw ConfigError("ensemble: model_seed_override length must equal q_models");
  if (family == ModelFamily::kMlp) {
    if (hidden.empty()) throw ConfigError("ensemble: mlp needs at least one hidden layer");
    for (int h : hidden)
      if (h < 1) throw ConfigError("ensemble: hidden widths must be positive");
    adam.validate();
  } else {
    newton.validate();
    sparsity.validate();
  }
  competition.validate();
}

int EnsembleConfig::resolve_inner_steps() const {
  if (inner_steps > 0) return inner_steps;
  return family == ModelFamily::kLinear ? 5 : 50;
}

double hard_composite_mse(const Matrix& predictions, const std::vector<int>& labels,
                          const std::vector<double>& targets) {
  if (predictions.rows != labels.size() || predictions.rows != targets.size())
    throw ConfigError("hard_composite_mse: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < predictions.rows; ++i) {
    const double r = targets[i] - predictions(i, static_cast<std::size_t>(labels[i]));
    acc += r * r;
  }
  return acc / static_cast<double>(predictions.rows);
}

FitResult fit_ensemble(const Dataset& data, const FeatureMatrix& features,
                       const EnsembleConfig& cfg, std::uint64_t trial_seed) {
  cfg.validate();
  const std::size_t s = data.size();
  if (s < 2) throw ConfigError("fit_ensemble: need at least two observations");
  const int q = cfg.q_models;
  const std::vector<double> targets = data.targets();

  if (cfg.family == ModelFamily::kLinear) {
    if (features.values.rows != s)
      throw ConfigError("fit_ensemble: feature matrix does not cover the dataset");
    features.spec.validate(data.n_vars());
  }

  // Standardized inputs drive neighbor smoothing and mlp evaluation;
  // linear features stay in problem units so coefficients are readable.
  auto [std_data, scaling] = standardize(data);
  const Matrix z = std_data.inputs_matrix();

  const int n_nbrs = cfg.competition.resolve_neighbors(s);
  CompetitionConfig comp = cfg.competition;
  comp.n_neighbors = n_nbrs;
  const NeighborIndex idx = build_neighbor_index(std_data, n_nbrs);

  std::vector<TrainedModel> models(q);
  std::vector<Rng> streams;
  streams.reserve(q);
  std::vector<AdamState> adam_states;
  const std::size_t p =
      cfg.family == ModelFamily::kLinear ? features.values.cols : 0;

  for (int k = 0; k < q; ++k) {
    const std::uint64_t model_seed = cfg.model_seed_override.empty()
                                         ? derive_seed(trial_seed, k)
                                         : cfg.model_seed_override[k];
    streams.emplace_back(model_seed);
    models[k].family = cfg.family;
    if (cfg.family == ModelFamily::kLinear) {
      models[k].beta.resize(p);
      for (double& b : models[k].beta) b = streams[k].uniform(-0.1, 0.1);
    } else {
      std::vector<int> widths;
      widths.push_back(static_cast<int>(data.n_vars()));
      widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
      widths.push_back(1);
      models[k].mlp = make_mlp(widths, streams[k]);
      adam_states.emplace_back(models[k].mlp.parameter_count());
    }
  }

  Matrix preds(s, q);
  auto predict_all = [&] {
    for (int k = 0; k < q; ++k) {
      const std::vector<double> yhat =
          cfg.family == ModelFamily::kLinear
              ? predict_linear(features, models[k].beta)
              : predict_mlp(models[k].mlp, z);
      for (std::size_t i = 0; i < s; ++i) preds(i, k) = yhat[i];
    }
  };

  const int inner = cfg.resolve_inner_steps();

  FitResult fit;
  fit.trial_seed = trial_seed;
  fit.feature_spec = features.spec;
  fit.scaling = scaling;
  fit.n_neighbors = n_nbrs;

  std::vector<int> prev_labels;
  int stable_run = 0;
  // Minibatch cursors live across outer passes so every row is visited even
  // when one pass covers less than a full epoch.
  std::vector<std::size_t> cursors(static_cast<std::size_t>(q), 0);

  for (int outer = 0; outer < cfg.outer_iters; ++outer) {
    predict_all();
    const SquaredErrorMatrix se = squared_errors(preds, targets);
    fit.weights.alpha = compute_raw_weights(se, comp);
    fit.weights.alpha_bar = smooth_weights(fit.weights.alpha, idx);
    fit.weights.alpha_hat =
        combine_weights(fit.weights.alpha, fit.weights.alpha_bar, comp.gamma);
    fit.labels = assign_regimes(fit.weights.alpha_bar);
    fit.loss_history.push_back(hard_composite_mse(preds, fit.labels, targets));
    fit.outer_iters_run = outer + 1;

    stable_run = fit.labels == prev_labels ? stable_run + 1 : 1;
    prev_labels = fit.labels;
    if (stable_run >= 10) {
      fit.converged = true;
      break;
    }

    for (int k = 0; k < q; ++k) {
      const std::vector<double> w = weight_column(fit.weights.alpha_hat, k);
      if (cfg.family == ModelFamily::kLinear) {
        for (int step = 0; step < inner; ++step) {
          const WeightedLossReport rep =
              linear_objective(features, targets, w, models[k].beta, cfg.sparsity);
          check_finite(rep, k);
          if (inf_norm(rep.grad) < cfg.newton.grad_tol) break;
          models[k].beta =
              newton_step(models[k].beta, rep.grad, rep.hessian, cfg.newton, streams[k]);
        }
      } else {
        std::vector<double> params = models[k].mlp.flatten();
        const std::size_t batch = cfg.adam.batch_size > 0
                                      ? static_cast<std::size_t>(cfg.adam.batch_size)
                                      : s;
        std::size_t& cursor = cursors[static_cast<std::size_t>(k)];
        for (int step = 0; step < inner; ++step) {
          WeightedLossReport rep;
          if (batch >= s) {
            rep = mlp_weighted_loss_grad(models[k].mlp, z, targets, w);
          } else {
            std::vector<std::size_t> rows(batch);
            for (std::size_t b = 0; b < batch; ++b)
              rows[b] = (cursor + b) % s;
            cursor = (cursor + batch) % s;
            rep = mlp_weighted_loss_grad(models[k].mlp, z, targets, w, rows);
          }
          check_finite(rep, k);
          params = adam_step(params, rep.grad, adam_states[k], cfg.adam);
          models[k].mlp.unflatten(params);
        }
      }
    }
  }

  if (!fit.converged) {
    // Parameters moved after the last weight computation; refresh the
    // reported state so it matches the returned models.
    predict_all();
    const SquaredErrorMatrix se = squared_errors(preds, targets);
    fit.weights.alpha = compute_raw_weights(se, comp);
    fit.weights.alpha_bar = smooth_weights(fit.weights.alpha, idx);
    fit.weights.alpha_hat =
        combine_weights(fit.weights.alpha, fit.weights.alpha_bar, comp.gamma);
    fit.labels = assign_regimes(fit.weights.alpha_bar);
    fit.loss_history.push_back(hard_composite_mse(preds, fit.labels, targets));
  }

  fit.models = std::move(models);
  fit.predictions = std::move(preds);
  return fit;
}

FitResult run_trials(const Dataset& data, const FeatureMatrix& features,
                     const EnsembleConfig& cfg) {
  cfg.validate();
  bool have_best = false;
  FitResult best;
  double best_mse = 0.0;
  std::string failures;

  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t trial_seed = cfg.seed + static_cast<std::uint64_t>(t);
    try {
      FitResult fit = fit_ensemble(data, features, cfg, trial_seed);
      const double mse = fit.loss_history.back();
      if (!have_best || mse < best_mse) {
        have_best = true;
        best_mse = mse;
        best = std::move(fit);
      }
    } catch (const TrainingError& e) {
      failures += "trial seed " + std::to_string(trial_seed) + ": " + e.what() + "\n";
    }
  }
  if (!have_best)
    throw TrainingError("all trials failed:\n" + failures);
  return best;
}

CompositeEval evaluate_composite(const FitResult& fit, const Dataset& data,
                                 const CompetitionConfig& comp) {
  if (fit.models.empty()) throw ConfigError("evaluate_composite: empty fit");
  const std::size_t n = data.size();
  if (n < 2) throw ConfigError("evaluate_composite: need at least two observations");
  const int q = static_cast<int>(fit.models.size());

  CompositeEval ev;
  ev.predictions = Matrix(n, static_cast<std::size_t>(q));
  const Dataset std_block = apply_scaling(data, fit.scaling);
  const Matrix z = std_block.inputs_matrix();
  FeatureMatrix fm;
  if (fit.models[0].family == ModelFamily::kLinear)
    fm = build_feature_library(data, fit.feature_spec);
  for (int k = 0; k < q; ++k) {
    const std::vector<double> yhat = fit.models[k].family == ModelFamily::kLinear
                                         ? predict_linear(fm, fit.models[k].beta)
                                         : predict_mlp(fit.models[k].mlp, z);
    for (std::size_t i = 0; i < n; ++i) ev.predictions(i, k) = yhat[i];
  }

  CompetitionConfig block = comp;
  block.n_neighbors = comp.resolve_neighbors(n);
  const NeighborIndex idx = build_neighbor_index(std_block, block.n_neighbors);
  const std::vector<double> targets = data.targets();
  const SquaredErrorMatrix se = squared_errors(ev.predictions, targets);
  const Matrix alpha = compute_raw_weights(se, block);
  const Matrix alpha_bar = smooth_weights(alpha, idx);
  ev.labels = assign_regimes(alpha_bar);
  ev.mse = hard_composite_mse(ev.predictions, ev.labels, targets);
  return ev;
}

std::vector<double> composite_predict(const FitResult& fit, const Dataset& train_data,
                                      const Matrix& x_new, PredictMode mode) {
  if (fit.models.empty()) throw ConfigError("composite_predict: empty fit");
  if (x_new.cols != train_data.n_vars())
    throw ConfigError("composite_predict: input width mismatch");
  if (fit.labels.size() != train_data.size())
    throw ConfigError("composite_predict: fit does not match training data");
  const int q = static_cast<int>(fit.models.size());

  // Routing wants majority statistics rather than locality, so its width
  // grows with the reference set and is capped later than the smoothing one.
  const int vote_k = static_cast<int>(std::clamp<std::size_t>(
      (train_data.size() + 49) / 50, 3, 100));

  const Dataset std_train = apply_scaling(train_data, fit.scaling);
  const Matrix z_train = std_train.inputs_matrix();

  std::vector<double> out(x_new.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x_new.rows); ++i) {
    std::vector<double> x(x_new.row(i), x_new.row(i) + x_new.cols);
    const std::vector<double> zq = fit.scaling.apply(x);

    std::vector<double> yhat(q);
    for (int k = 0; k < q; ++k) {
      if (fit.models[k].family == ModelFamily::kLinear) {
        const std::vector<double> f = eval_features(fit.feature_spec, x);
        double acc = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j)
          acc += f[j] * fit.models[k].beta[j];
        yhat[k] = acc;
      } else {
        Matrix one(1, x_new.cols);
        for (std::size_t j = 0; j < x_new.cols; ++j) one(0, j) = zq[j];
        yhat[k] = predict_mlp(fit.models[k].mlp, one)[0];
      }
    }

    if (mode == PredictMode::kHard) {
      // Majority vote over the vote_k nearest training labels; scattered
      // label errors carry 1/vote_k weight instead of deciding alone.
      const std::vector<int> nn = nearest_rows(z_train, zq, vote_k);
      std::vector<int> votes(q, 0);
      for (int j : nn) votes[fit.labels[j]] += 1;
      int pick = 0;
      for (int k = 1; k < q; ++k)
        if (votes[k] > votes[pick]) pick = k;
      out[i] = yhat[pick];
    } else {
      const std::vector<int> nn = nearest_rows(z_train, zq, fit.n_neighbors);
      double pred = 0.0;
      for (int k = 0; k < q; ++k) {
        double wk = 0.0;
        for (int j : nn) wk += fit.weights.alpha_bar(j, k);
        pred += (wk / static_cast<double>(nn.size())) * yhat[k];
      }
      out[i] = pred;
    }
  }
  return out;
}

}  // namespace clsm
