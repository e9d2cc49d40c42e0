#pragma once

#include <cstddef>
#include <vector>

#include "clsm/loss_report.hpp"
#include "clsm/matrix.hpp"
#include "clsm/rng.hpp"

namespace clsm {

struct MlpLayer {
  Matrix w;               // fan_out x fan_in
  std::vector<double> b;  // fan_out
};

// Fully connected net, tanh on every hidden layer, affine scalar output.
struct MlpModel {
  std::vector<MlpLayer> layers;

  std::size_t input_width() const;
  std::size_t parameter_count() const;
  std::vector<int> widths() const;

  // Flat layout: per layer, w row-major then b. Gradients use the same order.
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& params);

  // Adjacent layer dimensions must chain and the output must be scalar.
  void validate() const;
};

// widths = {n_in, hidden..., 1}. Weights ~ U(-s, s) with
// s = sqrt(6 / (fan_in + fan_out)); biases start at zero.
MlpModel make_mlp(const std::vector<int>& widths, Rng& rng);

std::vector<double> predict_mlp(const MlpModel& m, const Matrix& inputs);

// Loss (1/S) sum_i w_i (yhat_i - y_i)^2 with gradients via backprop,
// aligned with flatten(). The row subset, when given, replaces the full
// set (S becomes rows.size()).
WeightedLossReport mlp_weighted_loss_grad(const MlpModel& m, const Matrix& inputs,
                                          const std::vector<double>& targets,
                                          const std::vector<double>& weights);
WeightedLossReport mlp_weighted_loss_grad(const MlpModel& m, const Matrix& inputs,
                                          const std::vector<double>& targets,
                                          const std::vector<double>& weights,
                                          const std::vector<std::size_t>& rows);

}  // namespace clsm
