#include "clsm/problems.hpp"

#include <cmath>
#include <cstdio>

#include "clsm/common.hpp"
#include "clsm/rng.hpp"

namespace clsm {

Trajectory integrate_rk4(const OdeSystem& sys, const std::vector<double>& y0,
                         const std::vector<double>& t_grid) {
  const std::size_t dim = y0.size();
  if (sys.dimension < 1 || dim != static_cast<std::size_t>(sys.dimension))
    throw ConfigError("integrate_rk4: initial state does not match system dimension");
  if (t_grid.size() < 2) throw ConfigError("integrate_rk4: need at least two grid points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw ConfigError("integrate_rk4: grid must be strictly increasing");

  Trajectory traj;
  traj.t = t_grid;
  traj.states = Matrix(t_grid.size(), dim);
  traj.accelerations.resize(t_grid.size());

  std::vector<double> y = y0;
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  auto record = [&](std::size_t node) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (!is_finite(y[j])) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", t_grid[node]);
        throw TrainingError(std::string("integrate_rk4: state blew up at t = ") + buf);
      }
      traj.states(node, j) = y[j];
    }
    sys.rhs(t_grid[node], y.data(), k1.data());
    traj.accelerations[node] = k1[dim - 1];
  };

  record(0);
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double h = t_grid[i + 1] - t;

    sys.rhs(t, y.data(), k1.data());
    for (std::size_t j = 0; j < dim; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    sys.rhs(t + 0.5 * h, tmp.data(), k2.data());
    for (std::size_t j = 0; j < dim; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    sys.rhs(t + 0.5 * h, tmp.data(), k3.data());
    for (std::size_t j = 0; j < dim; ++j) tmp[j] = y[j] + h * k3[j];
    sys.rhs(t + h, tmp.data(), k4.data());
    for (std::size_t j = 0; j < dim; ++j)
      y[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);

    record(i + 1);
  }
  return traj;
}

std::vector<double> central_difference_accelerations(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 3)
    throw ConfigError("central_difference_accelerations: need at least 3 nodes");
  const std::size_t v = traj.states.cols - 1;  // velocity column
  std::vector<double> a(n);
  for (std::size_t i = 1; i + 1 < n; ++i)
    a[i] = (traj.states(i + 1, v) - traj.states(i - 1, v)) /
           (traj.t[i + 1] - traj.t[i - 1]);
  const double h0 = traj.t[1] - traj.t[0];
  a[0] = (-3.0 * traj.states(0, v) + 4.0 * traj.states(1, v) - traj.states(2, v)) /
         (2.0 * h0);
  const double h1 = traj.t[n - 1] - traj.t[n - 2];
  a[n - 1] = (3.0 * traj.states(n - 1, v) - 4.0 * traj.states(n - 2, v) +
              traj.states(n - 3, v)) /
             (2.0 * h1);
  return a;
}

Dataset gen_piecewise_sinusoid(std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.observations.reserve(1201);
  for (int i = 0; i <= 1200; ++i) {
    const double x = (i - 600) * 0.05;
    const double f = x <= 0.0 ? 0.2 * std::sin(x) : 0.1 * x * std::cos(x);
    d.observations.push_back({{x}, f + rng.normal(0.0, 0.1)});
  }
  return d;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

Dataset trajectory_to_dataset(const Trajectory& traj, bool fd_targets) {
  const std::vector<double> targets =
      fd_targets ? central_difference_accelerations(traj) : traj.accelerations;
  Dataset d;
  d.observations.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    d.observations.push_back(
        {{traj.states(i, 0), traj.states(i, 1), traj.t[i]}, targets[i]});
  return d;
}

}  // namespace

std::pair<Dataset, FeatureSpec> gen_oscillator1(bool fd_targets) {
  const double m = 0.75, c = 0.05, k = 2.4;
  OdeSystem sys;
  sys.dimension = 2;
  sys.rhs = [=](double t, const double* y, double* out) {
    const double force = t <= 2.0 ? 2.0 * t : 0.0;
    out[0] = y[1];
    out[1] = (-c * y[1] - k * y[0] + force) / m;
  };
  const Trajectory traj = integrate_rk4(sys, {2.0, 0.0}, uniform_grid(0.0, 10.0, 500));
  return {trajectory_to_dataset(traj, fd_targets), oscillator_quadratic_feature_spec()};
}

std::pair<Dataset, FeatureSpec> gen_oscillator2(bool fd_targets) {
  const double delta = 0.25;
  OdeSystem sys;
  sys.dimension = 2;
  sys.rhs = [=](double t, const double* y, double* out) {
    out[0] = y[1];
    if (y[0] <= delta)
      out[1] = -0.25 * y[1] - 10.0 * y[0] + 0.1 * t;
    else
      out[1] = -0.40 * y[1] - 15.0 * y[0] + 0.1 * t + 1.25;
  };
  const Trajectory traj = integrate_rk4(sys, {1.0, 0.0}, uniform_grid(0.0, 10.0, 200));
  return {trajectory_to_dataset(traj, fd_targets), oscillator_quadratic_feature_spec()};
}

FlameData gen_flame_surrogate(std::uint64_t seed, std::size_t n_samples) {
  if (n_samples < 100)
    throw ConfigError("gen_flame_surrogate: need at least 100 samples");
  Rng rng(seed);
  FlameData out;
  out.data.observations.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double p = rng.uniform(1.0, 10.0);
    const double temp = rng.uniform(300.0, 600.0);
    const double phi = rng.uniform(0.6, 1.4);
    const double a = 0.4 * std::pow(temp / 300.0, 1.8) * std::pow(p, -0.4);
    const double g = phi < 1.0 ? 8.0 * std::pow(phi - 0.5, 3.0)
                               : std::exp(-1.8 * (phi - 1.0));
    out.data.observations.push_back({{p, temp, phi}, a * g + rng.normal(0.0, 1e-3)});
  }
  const std::size_t n_train =
      n_samples - static_cast<std::size_t>(std::llround(0.4 * static_cast<double>(n_samples)));
  for (std::size_t i = 0; i < n_samples; ++i)
    (i < n_train ? out.train_rows : out.test_rows).push_back(i);
  return out;
}

double demo_function(double mu, double x) {
  return std::sin(mu * x) + x * std::cos(8.0 * x) + std::exp(0.1 * x) +
         1.2 * std::tanh(x);
}

Dataset gen_landscape_demo(std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.observations.reserve(200);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-3.0, 3.0);
    const double mu = x < 0.0 ? -1.0 : 2.0;
    d.observations.push_back({{x}, demo_function(mu, x)});
  }
  return d;
}

LandscapeResult loss_landscape(const std::vector<double>& mu_grid,
                               LandscapeSubset subset, std::uint64_t seed) {
  if (mu_grid.empty()) throw ConfigError("loss_landscape: empty mu grid");
  const Dataset d = gen_landscape_demo(seed);

  LandscapeResult res;
  res.mu = mu_grid;
  std::vector<double> y;
  for (const Observation& obs : d.observations) {
    const bool keep = subset == LandscapeSubset::kAll ||
                      (subset == LandscapeSubset::kNegative ? obs.x[0] < 0.0
                                                            : obs.x[0] >= 0.0);
    if (keep) {
      res.x.push_back(obs.x[0]);
      y.push_back(obs.y);
    }
  }
  const std::size_t n = res.x.size();
  res.per_sample = Matrix(mu_grid.size(), n);
  res.mean_loss.assign(mu_grid.size(), 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(mu_grid.size()); ++g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - demo_function(mu_grid[g], res.x[i]);
      res.per_sample(g, i) = r * r;
      acc += r * r;
    }
    res.mean_loss[g] = acc / static_cast<double>(n);
  }
  return res;
}

}  // namespace clsm
