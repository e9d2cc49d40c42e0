#include "clsm/linear_model.hpp"

#include <cmath>
#include <cstddef>

#include "clsm/common.hpp"

namespace clsm {

void SparsityConfig::validate() const {
  if (lambda < 0.0) throw ConfigError("sparsity: lambda must be >= 0");
  if (mu_s <= 0.0) throw ConfigError("sparsity: mu_s must be > 0");
}

std::vector<double> predict_linear(const FeatureMatrix& fm,
                                   const std::vector<double>& beta) {
  const Matrix& f = fm.values;
  if (beta.size() != f.cols)
    throw ConfigError("predict_linear: coefficient count does not match features");
  std::vector<double> out(f.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(f.rows); ++i) {
    const double* row = f.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < f.cols; ++j) acc += row[j] * beta[j];
    out[i] = acc;
  }
  return out;
}

WeightedLossReport linear_objective(const FeatureMatrix& fm,
                                    const std::vector<double>& targets,
                                    const std::vector<double>& weights,
                                    const std::vector<double>& beta,
                                    const SparsityConfig& sparsity) {
  sparsity.validate();
  const Matrix& f = fm.values;
  const std::size_t s = f.rows;
  const std::size_t p = f.cols;
  if (targets.size() != s || weights.size() != s)
    throw ConfigError("linear_objective: row count mismatch");
  if (beta.size() != p)
    throw ConfigError("linear_objective: coefficient count mismatch");

  const int bias = fm.spec.bias_index();
  const double inv_s = 1.0 / static_cast<double>(s);

  // Residuals once; every derivative below reuses them. Serial so the
  // gradient/Hessian reductions stay in row order regardless of threads.
  std::vector<double> resid(s);
  for (std::size_t i = 0; i < s; ++i) {
    const double* row = f.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) acc += row[j] * beta[j];
    resid[i] = acc - targets[i];
  }

  WeightedLossReport rep;
  rep.grad.assign(p, 0.0);
  rep.hessian = Matrix(p, p);

  double loss = 0.0;
  for (std::size_t i = 0; i < s; ++i) loss += weights[i] * resid[i] * resid[i];
  loss *= inv_s;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(p); ++j) {
    double g = 0.0;
    for (std::size_t i = 0; i < s; ++i)
      g += weights[i] * resid[i] * f(i, static_cast<std::size_t>(j));
    rep.grad[j] = 2.0 * inv_s * g;
  }

  // H_jk = (2/S) sum_i w_i f_ij f_ik; symmetric, filled from the upper triangle.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(p); ++j) {
    for (std::size_t k = static_cast<std::size_t>(j); k < p; ++k) {
      double h = 0.0;
      for (std::size_t i = 0; i < s; ++i)
        h += weights[i] * f(i, static_cast<std::size_t>(j)) * f(i, k);
      h *= 2.0 * inv_s;
      rep.hessian(static_cast<std::size_t>(j), k) = h;
      rep.hessian(k, static_cast<std::size_t>(j)) = h;
    }
  }

  if (sparsity.lambda > 0.0) {
    for (std::size_t j = 0; j < p; ++j) {
      if (static_cast<int>(j) == bias) continue;
      const double b = beta[j];
      const double root = std::sqrt(b * b + sparsity.mu_s);
      loss += sparsity.lambda * root;
      rep.grad[j] += sparsity.lambda * b / root;
      rep.hessian(j, j) += sparsity.lambda * sparsity.mu_s / (root * root * root);
    }
  }

  rep.loss = loss;
  return rep;
}

}  // namespace clsm
