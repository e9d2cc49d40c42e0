#include "clsm/competition.hpp"

#include <algorithm>
#include <cmath>

#include "clsm/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clsm {

namespace {
constexpr double kExpClamp = -700.0;  // exp(-700) is still a normal double
}

void CompetitionConfig::validate() const {
  if (kappa < 0.0) throw ConfigError("competition: kappa must be >= 0");
  if (gamma < 0.0) throw ConfigError("competition: gamma must be >= 0");
  if (c_floor <= 0.0) throw ConfigError("competition: c_floor must be > 0");
  if (n_neighbors < 0) throw ConfigError("competition: n_neighbors must be >= 0");
}

int CompetitionConfig::resolve_neighbors(std::size_t s) const {
  if (n_neighbors > 0) {
    if (static_cast<std::size_t>(n_neighbors) > s)
      throw ConfigError("competition: n_neighbors exceeds dataset size");
    return n_neighbors;
  }
  const auto suggested =
      static_cast<int>(std::ceil(0.02 * static_cast<double>(s)));
  const int clamped = std::clamp(suggested, 3, 50);
  return static_cast<int>(std::min<std::size_t>(clamped, s));
}

Matrix compute_raw_weights(const SquaredErrorMatrix& sem, const CompetitionConfig& cfg) {
  cfg.validate();
  const Matrix& se = sem.se;
  const std::size_t s = se.rows;
  const std::size_t q = se.cols;
  if (q < 1) throw ConfigError("compute_raw_weights: need at least one model");

  Matrix alpha(s, q);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s); ++i) {
    const double* row = se.row(i);
    double* out = alpha.row(i);

    double c = row[0];
    for (std::size_t k = 1; k < q; ++k) c = std::min(c, row[k]);
    c = std::max(c, cfg.c_floor);

    // exponents -kappa*se/c, stabilized by subtracting the row maximum
    double emax = -cfg.kappa * row[0] / c;
    out[0] = emax;
    for (std::size_t k = 1; k < q; ++k) {
      out[k] = -cfg.kappa * row[k] / c;
      emax = std::max(emax, out[k]);
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
      out[k] = std::exp(std::max(out[k] - emax, kExpClamp));
      denom += out[k];
    }
    for (std::size_t k = 0; k < q; ++k) out[k] /= denom;
  }
  return alpha;
}

Matrix smooth_weights(const Matrix& alpha, const NeighborIndex& idx) {
  if (idx.n_rows != alpha.rows)
    throw ConfigError("smooth_weights: neighbor index does not cover all rows");
  const std::size_t s = alpha.rows;
  const std::size_t q = alpha.cols;
  const int n = idx.n_neighbors;

  Matrix out(s, q);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s); ++i) {
    const int* nbr = idx.row(i);
    double* row = out.row(i);
    for (int j = 0; j < n; ++j) {
      const double* a = alpha.row(nbr[j]);
      for (std::size_t k = 0; k < q; ++k) row[k] += a[k];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < q; ++k) row[k] *= inv;
  }
  return out;
}

Matrix combine_weights(const Matrix& alpha, const Matrix& alpha_bar, double gamma) {
  if (alpha.rows != alpha_bar.rows || alpha.cols != alpha_bar.cols)
    throw ConfigError("combine_weights: shape mismatch");
  Matrix out(alpha.rows, alpha.cols);
  const std::size_t total = alpha.data.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
    out.data[i] = alpha.data[i] * std::pow(alpha_bar.data[i], gamma);
  }
  return out;
}

double weighted_mse(const std::vector<double>& residuals,
                    const std::vector<double>& weights) {
  if (residuals.size() != weights.size())
    throw ConfigError("weighted_mse: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i)
    acc += weights[i] * residuals[i] * residuals[i];
  return acc / static_cast<double>(residuals.size());
}

std::vector<int> assign_regimes(const Matrix& alpha_bar) {
  std::vector<int> labels(alpha_bar.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(alpha_bar.rows); ++i) {
    const double* row = alpha_bar.row(i);
    int best = 0;
    for (std::size_t k = 1; k < alpha_bar.cols; ++k)
      if (row[k] > row[best]) best = static_cast<int>(k);
    labels[i] = best;
  }
  return labels;
}

SquaredErrorMatrix squared_errors(const Matrix& predictions,
                                  const std::vector<double>& targets) {
  if (predictions.rows != targets.size())
    throw ConfigError("squared_errors: row count mismatch");
  SquaredErrorMatrix out;
  out.se = Matrix(predictions.rows, predictions.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(predictions.rows); ++i) {
    const double* p = predictions.row(i);
    double* o = out.se.row(i);
    for (std::size_t k = 0; k < predictions.cols; ++k) {
      const double r = targets[i] - p[k];
      o[k] = r * r;
    }
  }
  return out;
}

}  // namespace clsm
