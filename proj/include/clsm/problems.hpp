#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "clsm/dataset.hpp"
#include "clsm/features.hpp"
#include "clsm/matrix.hpp"

namespace clsm {

struct OdeSystem {
  int dimension = 2;
  // rhs(t, state, out): writes d(state)/dt into out.
  std::function<void(double, const double*, double*)> rhs;
};

struct Trajectory {
  std::vector<double> t;
  Matrix states;                       // T x dim
  std::vector<double> accelerations;   // last RHS component at each node

  std::size_t size() const { return t.size(); }
};

// Classical fixed-step RK4 over the given strictly increasing grid, one
// step per interval. accelerations[i] is the exact RHS evaluated at
// (t_i, states_i), not a finite difference. Non-finite states abort with
// the blow-up time in the message.
Trajectory integrate_rk4(const OdeSystem& sys, const std::vector<double>& y0,
                         const std::vector<double>& t_grid);

// Second-order finite-difference accelerations from the velocity column
// (central in the interior, one-sided at the ends). Alternative to the
// exact RHS targets for studying differentiation noise.
std::vector<double> central_difference_accelerations(const Trajectory& traj);

// Two-branch sine wave on x in [-30, 30] at step 0.05 (1201 points):
// 0.2 sin(x) for x <= 0, 0.1 x cos(x) for x > 0, plus N(0, 0.01) noise.
Dataset gen_piecewise_sinusoid(std::uint64_t seed);

// Forced damped oscillator (m=0.75, c=0.05, k=2.4, F(t)=2t for t<=2, then
// unforced), 500 nodes on t in [0,10], y(0)=2, dy(0)=0. Inputs (y, dy, t),
// target = exact RHS acceleration, or finite differences when fd_targets.
std::pair<Dataset, FeatureSpec> gen_oscillator1(bool fd_targets = false);

// State-switched oscillator (m=1, c1=0.25, k1=10 for y<=delta; c2=0.15,
// k2=5 added for y>delta; delta=0.25; F(t)=0.1t), 200 nodes on t in [0,10],
// y(0)=1, dy(0)=0. Same input/target layout as oscillator 1.
std::pair<Dataset, FeatureSpec> gen_oscillator2(bool fd_targets = false);

// Laminar-flame-speed-like surrogate on (p, T, phi):
//   s_L = A(p,T) * g(phi) + eta,  eta ~ N(0, 1e-6)
//   A(p,T) = 0.4 (T/300)^1.8 p^-0.4
//   g(phi) = 8 (phi - 0.5)^3        for phi <  1   (lean, rising)
//          = exp(-1.8 (phi - 1))    for phi >= 1   (rich, falling)
// g is continuous at phi = 1 and its slope changes sign only there.
// Samples are iid uniform on p in [1,10], T in [300,600], phi in [0.6,1.4];
// the trailing 40% of rows are the held-out test split.
struct FlameData {
  Dataset data;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};
FlameData gen_flame_surrogate(std::uint64_t seed, std::size_t n_samples);

// One-parameter demo function y = sin(mu x) + x cos(8x) + e^{0.1x}
// + 1.2 tanh(x).
double demo_function(double mu, double x);

// The demo dataset: 200 noiseless samples, x ~ U(-3, 3), generated with
// mu = -1 where x < 0 and mu = 2 elsewhere.
Dataset gen_landscape_demo(std::uint64_t seed);

enum class LandscapeSubset { kAll, kNegative, kNonNegative };

struct LandscapeResult {
  std::vector<double> mu;         // grid
  std::vector<double> x;          // retained sample positions
  Matrix per_sample;              // grid x samples squared errors
  std::vector<double> mean_loss;  // per grid value
};

// Per-sample and mean squared error of f_mu against the demo dataset,
// optionally restricted to x < 0 or x >= 0.
LandscapeResult loss_landscape(const std::vector<double>& mu_grid,
                               LandscapeSubset subset, std::uint64_t seed);

}  // namespace clsm
