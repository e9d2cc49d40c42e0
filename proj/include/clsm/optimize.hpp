#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "clsm/loss_report.hpp"
#include "clsm/matrix.hpp"
#include "clsm/rng.hpp"

namespace clsm {

struct NewtonConfig {
  // Jitter ceiling for the diagonal perturbation E = diag(eps),
  // eps_j ~ U(0, eps_max). Empty = 1e-6 * (1 + max|diag H|), per call.
  std::optional<double> eps_max;
  double clip_limit = 0.5;
  int max_iters = 200;
  double grad_tol = 1e-8;

  void validate() const;
  double resolve_eps_max(const Matrix& h) const;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_epochs = 100;
  int batch_size = 0;  // 0 = full batch

  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// One damped Newton update: solve (H + diag(eps)) d = g with fresh jitter,
// saturate each d_j to [-clip_limit, clip_limit], return theta - d.
// Singular systems are retried with fresh jitter up to 5 times, then
// solved in the pseudo-inverse sense.
std::vector<double> newton_step(const std::vector<double>& theta,
                                const std::vector<double>& g, const Matrix& h,
                                const NewtonConfig& cfg, Rng& rng);

// Standard bias-corrected Adam update; mutates state in place.
std::vector<double> adam_step(const std::vector<double>& theta,
                              const std::vector<double>& g, AdamState& state,
                              const AdamConfig& cfg);

using Objective = std::function<WeightedLossReport(const std::vector<double>&)>;

struct OptimizeResult {
  std::vector<double> theta;
  double loss = 0.0;
  int iters = 0;
  bool grad_converged = false;
};

// Newton loop: steps until max_iters or the gradient infinity norm drops
// below grad_tol. Returns the best loss seen, which is never worse than
// the loss at theta0. Non-finite loss aborts with a training error.
OptimizeResult optimize(const Objective& objective, std::vector<double> theta0,
                        const NewtonConfig& cfg, Rng& rng);

// Adam loop over full-batch gradients, max_epochs steps, same best-seen
// and finiteness contract.
OptimizeResult optimize(const Objective& objective, std::vector<double> theta0,
                        const AdamConfig& cfg);

}  // namespace clsm
