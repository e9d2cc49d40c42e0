#pragma once

#include <vector>

#include "clsm/features.hpp"
#include "clsm/matrix.hpp"
#include "clsm/mlp_model.hpp"
#include "clsm/neighbors.hpp"

// Plain single-threaded implementations of every parallel kernel, written
// independently of the production code paths. Tests compare the two; the
// bench target times them against each other.
namespace clsm::ref {

// Exact kNN by full scan, tie-broken toward the lower row index.
NeighborIndex knn_brute(const Matrix& inputs, int n_neighbors);

// Row-stochastic competitive weights from squared errors: softmax of
// -kappa * se / max(row min, c_floor), computed without the max-shift
// rearrangement (safe for moderate kappa).
Matrix raw_weights(const Matrix& se, double kappa, double c_floor);

Matrix smooth(const Matrix& alpha, const NeighborIndex& idx);

double weighted_mse(const std::vector<double>& residuals,
                    const std::vector<double>& weights);

std::vector<double> linear_predict(const Matrix& features,
                                   const std::vector<double>& beta);

// Scalar forward pass through a tanh net, one observation at a time.
double mlp_forward_single(const MlpModel& m, const std::vector<double>& x);

// Gaussian elimination with partial pivoting; the Newton-solve oracle.
std::vector<double> gaussian_solve(Matrix a, std::vector<double> b);

std::vector<double> feature_row(const FeatureSpec& spec,
                                const std::vector<double>& x);

}  // namespace clsm::ref
