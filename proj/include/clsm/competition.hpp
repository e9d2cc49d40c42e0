#pragma once

#include <cstddef>
#include <vector>

#include "clsm/matrix.hpp"
#include "clsm/neighbors.hpp"

namespace clsm {

// Parameters of the competitive weighting scheme.
//   kappa        separation sharpness (0 = uniform weights)
//   gamma        exponent applied to the smoothed weights (suggested 1..5)
//   n_neighbors  smoothing neighborhood size; 0 = auto (2% of S in [3, 50])
//   c_floor      lower bound on the per-row best squared error, so rows
//                where one model interpolates exactly stay well defined
struct CompetitionConfig {
  double kappa = 5.0;
  double gamma = 2.0;
  int n_neighbors = 0;
  double c_floor = 1e-12;

  void validate() const;
  int resolve_neighbors(std::size_t s) const;
};

// se[i][k] = (y_i - yhat_{i,k})^2 for each of the Q models.
struct SquaredErrorMatrix {
  Matrix se;  // S x Q
};

// The three weight arrays driving the competitive loss:
//   alpha      softmax share of each observation per model (rows sum to 1)
//   alpha_bar  neighborhood average of alpha
//   alpha_hat  alpha * alpha_bar^gamma, the weight used in the loss
struct WeightMatrix {
  Matrix alpha;
  Matrix alpha_bar;
  Matrix alpha_hat;
};

// Raw weights: alpha[i][k] = exp(-kappa se[i][k]/c_i) / sum_j exp(-kappa se[i][j]/c_i)
// with c_i = max(min_j se[i][j], c_floor). Computed with the row maximum
// shifted out of the exponents (a softmax identity) so large kappa cannot
// underflow the denominator; shifted exponents are clamped at -700.
Matrix compute_raw_weights(const SquaredErrorMatrix& se, const CompetitionConfig& cfg);

// alpha_bar[i][k] = mean of alpha[j][k] over the neighborhood of i.
Matrix smooth_weights(const Matrix& alpha, const NeighborIndex& idx);

// Elementwise alpha * alpha_bar^gamma, with 0^0 = 1 so gamma = 0 falls
// back to the raw weights.
Matrix combine_weights(const Matrix& alpha, const Matrix& alpha_bar, double gamma);

// (1/S) sum_i w_i r_i^2. Serial accumulation in row order, so the result
// does not depend on thread count.
double weighted_mse(const std::vector<double>& residuals,
                    const std::vector<double>& weights);

// label[i] = argmax_k alpha_bar[i][k], ties toward the lower k.
std::vector<int> assign_regimes(const Matrix& alpha_bar);

// Squared errors of a prediction matrix (S x Q) against targets.
SquaredErrorMatrix squared_errors(const Matrix& predictions,
                                  const std::vector<double>& targets);

}  // namespace clsm
