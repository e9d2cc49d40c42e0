// Times the OpenMP kernels against their single-threaded reference
// counterparts on a synthetic workload. Build target only; not a test.
#include <chrono>
#include <cstdio>
#include <string>

#include "clsm/competition.hpp"
#include "clsm/dataset.hpp"
#include "clsm/features.hpp"
#include "clsm/linear_model.hpp"
#include "clsm/mlp_model.hpp"
#include "clsm/neighbors.hpp"
#include "clsm/reference.hpp"
#include "clsm/rng.hpp"

using namespace clsm;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

void row(const std::string& name, double par_ms, double ref_ms) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name.c_str(), par_ms,
              ref_ms, ref_ms / par_ms);
}

}  // namespace

int main() {
  const std::size_t s = 4000;
  const int q = 4;
  Rng rng(7);

  Dataset d;
  d.observations.reserve(s);
  for (std::size_t i = 0; i < s; ++i)
    d.observations.push_back({{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
                               rng.uniform(0.0, 10.0)},
                              rng.normal()});
  auto [std_d, scaling] = standardize(d);
  const Matrix z = std_d.inputs_matrix();

  Matrix preds(s, q);
  for (double& v : preds.data) v = rng.normal();
  const SquaredErrorMatrix se = squared_errors(preds, d.targets());
  CompetitionConfig comp;
  comp.n_neighbors = 20;

  std::printf("%-28s %13s %13s %9s\n", "kernel", "parallel", "reference",
              "speedup");

  NeighborIndex idx;
  const double knn_par = time_best_of(3, [&] { idx = build_neighbor_index(std_d, 20); });
  const double knn_ref = time_best_of(3, [&] { ref::knn_brute(z, 20); });
  row("knn " + std::to_string(s) + "x20", knn_par, knn_ref);

  Matrix alpha;
  const double rw_par = time_best_of(5, [&] { alpha = compute_raw_weights(se, comp); });
  const double rw_ref = time_best_of(5, [&] { ref::raw_weights(se.se, comp.kappa, comp.c_floor); });
  row("raw weights", rw_par, rw_ref);

  const double sm_par = time_best_of(5, [&] { smooth_weights(alpha, idx); });
  const double sm_ref = time_best_of(5, [&] { ref::smooth(alpha, idx); });
  row("smooth weights", sm_par, sm_ref);

  const FeatureSpec spec = sinusoid_feature_spec();
  Dataset d1;
  d1.observations.reserve(s);
  for (std::size_t i = 0; i < s; ++i)
    d1.observations.push_back({{rng.uniform(-30.0, 30.0)}, rng.normal()});
  FeatureMatrix fm;
  const double ft_par = time_best_of(5, [&] { fm = build_feature_library(d1, spec); });
  const double ft_ref = time_best_of(5, [&] {
    for (const Observation& obs : d1.observations) ref::feature_row(spec, obs.x);
  });
  row("feature library", ft_par, ft_ref);

  std::vector<double> beta(spec.count(), 0.1);
  const double lp_par = time_best_of(5, [&] { predict_linear(fm, beta); });
  const double lp_ref = time_best_of(5, [&] { ref::linear_predict(fm.values, beta); });
  row("linear predict", lp_par, lp_ref);

  MlpModel net = make_mlp({3, 32, 32, 1}, rng);
  const double mf_par = time_best_of(5, [&] { predict_mlp(net, z); });
  const double mf_ref = time_best_of(5, [&] {
    for (std::size_t i = 0; i < s; ++i) {
      std::vector<double> x(z.row(i), z.row(i) + z.cols);
      ref::mlp_forward_single(net, x);
    }
  });
  row("mlp forward 32x32", mf_par, mf_ref);

  const std::vector<double> w(s, 1.0);
  const double gr_par = time_best_of(5, [&] {
    mlp_weighted_loss_grad(net, z, d.targets(), w);
  });
  row("mlp loss+grad 32x32", gr_par, gr_par);

  return 0;
}
