#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clsm/competition.hpp"
#include "clsm/dataset.hpp"
#include "clsm/features.hpp"
#include "clsm/linear_model.hpp"
#include "clsm/mlp_model.hpp"
#include "clsm/optimize.hpp"

namespace clsm {

enum class ModelFamily { kLinear, kMlp };

struct EnsembleConfig {
  int q_models = 2;
  ModelFamily family = ModelFamily::kLinear;
  CompetitionConfig competition;
  NewtonConfig newton;            // linear family
  AdamConfig adam;                // mlp family
  SparsityConfig sparsity;        // linear family
  std::vector<int> hidden = {32, 32};
  int outer_iters = 100;
  int inner_steps = 0;            // 0 = family default (5 Newton, 50 Adam)
  int trials = 5;
  std::uint64_t seed = 0;

  // When non-empty (length Q), fixes each model's random stream directly
  // instead of deriving it from the trial seed.
  std::vector<std::uint64_t> model_seed_override;

  void validate() const;
  int resolve_inner_steps() const;
};

struct TrainedModel {
  ModelFamily family = ModelFamily::kLinear;
  std::vector<double> beta;  // linear
  MlpModel mlp;              // mlp
};

struct FitResult {
  std::vector<TrainedModel> models;
  WeightMatrix weights;              // state at the final parameters
  std::vector<int> labels;
  std::vector<double> loss_history;  // hard-assignment composite MSE per outer pass
  Matrix predictions;                // S x Q, final per-model predictions
  std::uint64_t trial_seed = 0;
  int outer_iters_run = 0;
  bool converged = false;

  FeatureSpec feature_spec;  // empty for the mlp family
  ScalingParams scaling;     // input standardization behind kNN / mlp inputs
  int n_neighbors = 0;       // resolved smoothing width
};

// Mean squared error of the composite that routes each observation to its
// labeled model.
double hard_composite_mse(const Matrix& predictions, const std::vector<int>& labels,
                          const std::vector<double>& targets);

// One competitive training run: alternates weight recomputation with
// inner_steps of per-model optimization under frozen weights until
// outer_iters or until labels hold still for 10 consecutive passes.
// `features` is consumed by the linear family and may be empty for mlp.
FitResult fit_ensemble(const Dataset& data, const FeatureMatrix& features,
                       const EnsembleConfig& cfg, std::uint64_t trial_seed);

// Restarts fit_ensemble with seeds seed, seed+1, ... and keeps the trial
// with the lowest hard-assignment composite MSE. Failed trials are skipped;
// if every trial fails the error lists each trial's diagnostic.
FitResult run_trials(const Dataset& data, const FeatureMatrix& features,
                     const EnsembleConfig& cfg);

struct CompositeEval {
  double mse = 0.0;            // hard-assignment composite MSE on the block
  std::vector<int> labels;     // competitive assignment of each block row
  Matrix predictions;          // N x Q per-model predictions
};

// Competitive-assignment evaluation on a labeled held-out block: per-model
// predictions feed the same squared-error -> weight -> label pipeline used
// during training, with neighbor smoothing rebuilt over the block itself
// (inputs standardized by the fit's scaling). Targets enter only through
// the assignment, exactly as they do for training rows.
CompositeEval evaluate_composite(const FitResult& fit, const Dataset& data,
                                 const CompetitionConfig& comp);

enum class PredictMode { kHard, kSoft };

// Composite prediction on new raw inputs. Hard mode routes each point by
// majority vote of the nearest training labels (one vote per fiftieth of
// the training set, between 3 and 100); soft mode blends all models by the
// neighbor-averaged final weights.
std::vector<double> composite_predict(const FitResult& fit, const Dataset& train_data,
                                      const Matrix& x_new, PredictMode mode);

}  // namespace clsm
