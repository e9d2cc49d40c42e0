#include "clsm/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "clsm/common.hpp"

namespace clsm {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
  return out;
}

double inf_norm(const std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void NewtonConfig::validate() const {
  if (eps_max && *eps_max < 0.0) throw ConfigError("newton: eps_max must be >= 0");
  if (clip_limit <= 0.0) throw ConfigError("newton: clip_limit must be > 0");
  if (max_iters < 1) throw ConfigError("newton: max_iters must be >= 1");
  if (grad_tol <= 0.0) throw ConfigError("newton: grad_tol must be > 0");
}

double NewtonConfig::resolve_eps_max(const Matrix& h) const {
  if (eps_max) return *eps_max;
  double d = 0.0;
  for (std::size_t j = 0; j < h.rows; ++j) d = std::max(d, std::abs(h(j, j)));
  return 1e-6 * (1.0 + d);
}

std::vector<double> newton_step(const std::vector<double>& theta,
                                const std::vector<double>& g, const Matrix& h,
                                const NewtonConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t p = theta.size();
  if (g.size() != p || h.rows != p || h.cols != p)
    throw ConfigError("newton_step: dimension mismatch");

  const double emax = cfg.resolve_eps_max(h);
  const Eigen::MatrixXd base = to_eigen(h);
  Eigen::VectorXd rhs(p);
  for (std::size_t j = 0; j < p; ++j) rhs(j) = g[j];

  Eigen::VectorXd d;
  bool solved = false;
  Eigen::MatrixXd jittered;
  const double resid_tol = 1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
  for (int attempt = 0; attempt < 5 && !solved; ++attempt) {
    jittered = base;
    for (std::size_t j = 0; j < p; ++j) jittered(j, j) += rng.uniform(0.0, emax);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(jittered);
    if (ldlt.info() != Eigen::Success) continue;
    d = ldlt.solve(rhs);
    solved = d.allFinite() &&
             (jittered * d - rhs).lpNorm<Eigen::Infinity>() <= resid_tol;
  }
  if (!solved) {
    // Least-squares pseudo-solve of the last jittered system.
    d = jittered.completeOrthogonalDecomposition().solve(rhs);
    if (!d.allFinite())
      throw TrainingError("newton_step: linear solve produced non-finite step");
  }

  std::vector<double> out(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double step = std::clamp(d(j), -cfg.clip_limit, cfg.clip_limit);
    out[j] = theta[j] - step;
  }
  return out;
}

void AdamConfig::validate() const {
  if (learning_rate <= 0.0) throw ConfigError("adam: learning_rate must be > 0");
  if (beta1 <= 0.0 || beta1 >= 1.0) throw ConfigError("adam: beta1 must be in (0,1)");
  if (beta2 <= 0.0 || beta2 >= 1.0) throw ConfigError("adam: beta2 must be in (0,1)");
  if (epsilon <= 0.0) throw ConfigError("adam: epsilon must be > 0");
  if (max_epochs < 1) throw ConfigError("adam: max_epochs must be >= 1");
  if (batch_size < 0) throw ConfigError("adam: batch_size must be >= 0");
}

std::vector<double> adam_step(const std::vector<double>& theta,
                              const std::vector<double>& g, AdamState& state,
                              const AdamConfig& cfg) {
  const std::size_t p = theta.size();
  if (g.size() != p || state.m.size() != p || state.v.size() != p)
    throw ConfigError("adam_step: dimension mismatch");

  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));

  std::vector<double> out(p);
  for (std::size_t j = 0; j < p; ++j) {
    state.m[j] = cfg.beta1 * state.m[j] + (1.0 - cfg.beta1) * g[j];
    state.v[j] = cfg.beta2 * state.v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
    const double mhat = state.m[j] / bc1;
    const double vhat = state.v[j] / bc2;
    out[j] = theta[j] - cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
  return out;
}

OptimizeResult optimize(const Objective& objective, std::vector<double> theta0,
                        const NewtonConfig& cfg, Rng& rng) {
  cfg.validate();
  OptimizeResult best;
  best.theta = theta0;
  best.loss = std::numeric_limits<double>::infinity();

  std::vector<double> theta = std::move(theta0);
  for (int it = 0; it < cfg.max_iters; ++it) {
    const WeightedLossReport rep = objective(theta);
    if (!std::isfinite(rep.loss) || !all_finite(rep.grad))
      throw TrainingError("optimize: non-finite loss or gradient");
    if (!rep.has_hessian())
      throw ConfigError("optimize: Newton requires a Hessian");
    if (rep.loss < best.loss) {
      best.loss = rep.loss;
      best.theta = theta;
    }
    best.iters = it + 1;
    if (inf_norm(rep.grad) < cfg.grad_tol) {
      best.grad_converged = true;
      return best;
    }
    theta = newton_step(theta, rep.grad, rep.hessian, cfg, rng);
  }
  // Score the final iterate too; the loop body above only scores pre-step.
  const WeightedLossReport rep = objective(theta);
  if (std::isfinite(rep.loss) && rep.loss < best.loss) {
    best.loss = rep.loss;
    best.theta = theta;
  }
  return best;
}

OptimizeResult optimize(const Objective& objective, std::vector<double> theta0,
                        const AdamConfig& cfg) {
  cfg.validate();
  OptimizeResult best;
  best.theta = theta0;
  best.loss = std::numeric_limits<double>::infinity();

  std::vector<double> theta = std::move(theta0);
  AdamState state(theta.size());
  for (int it = 0; it < cfg.max_epochs; ++it) {
    const WeightedLossReport rep = objective(theta);
    if (!std::isfinite(rep.loss) || !all_finite(rep.grad))
      throw TrainingError("optimize: non-finite loss or gradient");
    if (rep.loss < best.loss) {
      best.loss = rep.loss;
      best.theta = theta;
    }
    best.iters = it + 1;
    theta = adam_step(theta, rep.grad, state, cfg);
  }
  const WeightedLossReport rep = objective(theta);
  if (std::isfinite(rep.loss) && rep.loss < best.loss) {
    best.loss = rep.loss;
    best.theta = theta;
  }
  return best;
}

}  // namespace clsm
