#include "clsm/reference.hpp"

#include <algorithm>
#include <cmath>

#include "clsm/common.hpp"

namespace clsm::ref {

NeighborIndex knn_brute(const Matrix& inputs, int n_neighbors) {
  const std::size_t s = inputs.rows;
  if (n_neighbors < 1 || static_cast<std::size_t>(n_neighbors) > s)
    throw ConfigError("knn_brute: n_neighbors out of range");
  NeighborIndex idx;
  idx.n_rows = s;
  idx.n_neighbors = n_neighbors;
  idx.idx.resize(s * static_cast<std::size_t>(n_neighbors));

  std::vector<std::pair<double, int>> cand(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < inputs.cols; ++c) {
        const double diff = inputs(i, c) - inputs(j, c);
        d2 += diff * diff;
      }
      cand[j] = {d2, static_cast<int>(j)};
    }
    std::sort(cand.begin(), cand.end());
    for (int k = 0; k < n_neighbors; ++k)
      idx.idx[i * static_cast<std::size_t>(n_neighbors) + k] = cand[k].second;
  }
  return idx;
}

Matrix raw_weights(const Matrix& se, double kappa, double c_floor) {
  Matrix alpha(se.rows, se.cols);
  for (std::size_t i = 0; i < se.rows; ++i) {
    double c = se(i, 0);
    for (std::size_t k = 1; k < se.cols; ++k) c = std::min(c, se(i, k));
    c = std::max(c, c_floor);
    double denom = 0.0;
    for (std::size_t k = 0; k < se.cols; ++k) {
      alpha(i, k) = std::exp(-kappa * se(i, k) / c);
      denom += alpha(i, k);
    }
    for (std::size_t k = 0; k < se.cols; ++k) alpha(i, k) /= denom;
  }
  return alpha;
}

Matrix smooth(const Matrix& alpha, const NeighborIndex& idx) {
  Matrix out(alpha.rows, alpha.cols);
  for (std::size_t i = 0; i < alpha.rows; ++i) {
    for (int j = 0; j < idx.n_neighbors; ++j) {
      const int nbr = idx.row(i)[j];
      for (std::size_t k = 0; k < alpha.cols; ++k) out(i, k) += alpha(nbr, k);
    }
    for (std::size_t k = 0; k < alpha.cols; ++k)
      out(i, k) /= static_cast<double>(idx.n_neighbors);
  }
  return out;
}

double weighted_mse(const std::vector<double>& residuals,
                    const std::vector<double>& weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i)
    acc += weights[i] * residuals[i] * residuals[i];
  return acc / static_cast<double>(residuals.size());
}

std::vector<double> linear_predict(const Matrix& features,
                                   const std::vector<double>& beta) {
  std::vector<double> out(features.rows, 0.0);
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < features.cols; ++j)
      out[i] += features(i, j) * beta[j];
  return out;
}

double mlp_forward_single(const MlpModel& m, const std::vector<double>& x) {
  std::vector<double> cur = x;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const MlpLayer& layer = m.layers[l];
    std::vector<double> next(layer.w.rows);
    for (std::size_t r = 0; r < layer.w.rows; ++r) {
      double z = layer.b[r];
      for (std::size_t c = 0; c < layer.w.cols; ++c) z += layer.w(r, c) * cur[c];
      next[r] = l + 1 < m.layers.size() ? std::tanh(z) : z;
    }
    cur = std::move(next);
  }
  return cur[0];
}

std::vector<double> gaussian_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows;
  if (a.cols != n || b.size() != n)
    throw ConfigError("gaussian_solve: dimension mismatch");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0)
      throw TrainingError("gaussian_solve: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
    x[r] = acc / a(r, r);
  }
  return x;
}

std::vector<double> feature_row(const FeatureSpec& spec,
                                const std::vector<double>& x) {
  std::vector<double> out;
  out.reserve(spec.terms.size());
  for (const FeatureTerm& t : spec.terms) {
    double v = 1.0;
    for (const FeatureFactor& f : t.factors) {
      const double xi = x[static_cast<std::size_t>(f.col)];
      switch (f.kind) {
        case FactorKind::kVar: v *= xi; break;
        case FactorKind::kSin: v *= std::sin(xi); break;
        case FactorKind::kCos: v *= std::cos(xi); break;
      }
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace clsm::ref
