#pragma once

#include <vector>

#include "clsm/features.hpp"
#include "clsm/loss_report.hpp"
#include "clsm/matrix.hpp"

namespace clsm {

// Sparsity settings for a linear specialist. The bias column is never
// penalized; mu_s keeps the penalty twice differentiable near zero.
struct SparsityConfig {
  double lambda = 0.0;
  double mu_s = 1e-8;

  void validate() const;
};

std::vector<double> predict_linear(const FeatureMatrix& fm,
                                   const std::vector<double>& beta);

// Weighted squared error plus smoothed L1:
//   (1/S) sum_i w_i (y_i - f_i.beta)^2 + lambda sum_{j != bias} sqrt(beta_j^2 + mu_s)
WeightedLossReport linear_objective(const FeatureMatrix& fm,
                                    const std::vector<double>& targets,
                                    const std::vector<double>& weights,
                                    const std::vector<double>& beta,
                                    const SparsityConfig& sparsity);

}  // namespace clsm
