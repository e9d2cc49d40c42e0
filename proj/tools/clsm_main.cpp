#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "clsm/common.hpp"
#include "clsm/dataset.hpp"
#include "clsm/problems.hpp"
#include "clsm/report.hpp"
#include "clsm/serialize.hpp"
#include "clsm/trainer.hpp"

namespace {

using clsm::ConfigError;
using clsm::Dataset;
using clsm::FeatureSpec;
using clsm::ModelFamily;
using clsm::RunConfig;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Dataset resolve_dataset(const RunConfig& cfg) {
  if (!cfg.data_path.empty()) return clsm::load_dataset(cfg.data_path);
  if (cfg.problem == "sinusoid") return clsm::gen_piecewise_sinusoid(cfg.generator_seed);
  if (cfg.problem == "oscillator1") return clsm::gen_oscillator1().first;
  if (cfg.problem == "oscillator2") return clsm::gen_oscillator2().first;
  if (cfg.problem == "flame_surrogate")
    return clsm::gen_flame_surrogate(cfg.generator_seed, cfg.n_samples).data;
  if (cfg.problem == "landscape_demo") return clsm::gen_landscape_demo(cfg.generator_seed);
  throw ConfigError("unknown problem '" + cfg.problem + "'");
}

FeatureSpec resolve_features(const RunConfig& cfg, const Dataset& data) {
  if (cfg.ensemble.family != ModelFamily::kLinear) return {};
  FeatureSpec spec;
  if (cfg.features == "auto") {
    if (cfg.problem == "sinusoid")
      spec = clsm::sinusoid_feature_spec();
    else if (cfg.problem == "oscillator1" || cfg.problem == "oscillator2")
      spec = clsm::oscillator_quadratic_feature_spec();
    else
      throw ConfigError(
          "config: field 'features' is required here (use 'sinusoid', "
          "'oscillator', 'oscillator-quadratic', or a spec.json path)");
  } else if (cfg.features == "sinusoid") {
    spec = clsm::sinusoid_feature_spec();
  } else if (cfg.features == "oscillator") {
    spec = clsm::oscillator_feature_spec();
  } else if (cfg.features == "oscillator-quadratic") {
    spec = clsm::oscillator_quadratic_feature_spec();
  } else {
    spec = clsm::feature_spec_from_json(clsm::load_json(cfg.features));
  }
  spec.validate(data.n_vars());
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write failed: " + path);
}

int cmd_generate(const std::string& problem, std::uint64_t seed,
                 const std::string& out_dir, bool fd_targets, int n_samples) {
  std::filesystem::create_directories(out_dir);
  Dataset data;
  nlohmann::json spec_json;
  if (problem == "sinusoid") {
    data = clsm::gen_piecewise_sinusoid(seed);
    spec_json = clsm::feature_spec_to_json(clsm::sinusoid_feature_spec());
  } else if (problem == "oscillator1") {
    auto [d, spec] = clsm::gen_oscillator1(fd_targets);
    data = std::move(d);
    spec_json = clsm::feature_spec_to_json(spec);
  } else if (problem == "oscillator2") {
    auto [d, spec] = clsm::gen_oscillator2(fd_targets);
    data = std::move(d);
    spec_json = clsm::feature_spec_to_json(spec);
  } else if (problem == "flame_surrogate") {
    if (n_samples < 100) throw ConfigError("--n-samples must be >= 100");
    data = clsm::gen_flame_surrogate(seed, static_cast<std::size_t>(n_samples)).data;
    spec_json = {{"terms", nlohmann::json::array()}, {"family", "mlp"}};
  } else if (problem == "landscape_demo") {
    data = clsm::gen_landscape_demo(seed);
    spec_json = {{"terms", nlohmann::json::array()}, {"family", "none"}};
  } else {
    throw ConfigError("unknown problem '" + problem + "'");
  }

  const std::filesystem::path dir(out_dir);
  clsm::save_dataset(data, (dir / "data.csv").string());
  nlohmann::json truth = clsm::problem_truth(problem);
  if (problem == "flame_surrogate") {
    truth["n_samples"] = n_samples;
    truth["n_train"] = n_samples - static_cast<int>(std::llround(0.4 * n_samples));
    truth["split"] = "leading rows train, trailing 40% test";
  }
  clsm::save_json(truth, (dir / "truth.json").string());
  clsm::save_json(spec_json, (dir / "spec.json").string());
  std::cout << "wrote " << data.size() << " rows to " << (dir / "data.csv").string()
            << "\n";
  return 0;
}

std::string mlp_summary(const clsm::FitResult& fit) {
  std::string out;
  out += "competitive fit: " + std::to_string(fit.models.size()) +
         (fit.models.size() == 1 ? " model (global model, no competition)"
                                 : " specialized models") +
         " [mlp family]\n";
  out += "composite MSE (hard assignment): " + fmt17(fit.loss_history.back()) + "\n";
  out += fit.converged ? "labels converged after " +
                             std::to_string(fit.outer_iters_run) + " outer passes\n"
                       : "stopped at the outer-iteration cap (" +
                             std::to_string(fit.outer_iters_run) + " passes)\n";
  std::vector<int> counts(fit.models.size(), 0);
  for (int lab : fit.labels) counts[lab] += 1;
  for (std::size_t k = 0; k < counts.size(); ++k)
    out += "model " + std::to_string(k + 1) + ": " + std::to_string(counts[k]) +
           " observations won\n";
  out += "equation tables apply to the linear family only\n";
  return out;
}

int cmd_fit(const std::string& config_path, const std::string& out_dir,
            int q_override, int trials_override, long long seed_override) {
  RunConfig cfg = clsm::parse_run_config(clsm::load_json(config_path));
  if (q_override > 0) cfg.ensemble.q_models = q_override;
  if (trials_override > 0) cfg.ensemble.trials = trials_override;
  if (seed_override >= 0) cfg.ensemble.seed = static_cast<std::uint64_t>(seed_override);
  cfg.ensemble.validate();

  Dataset data;
  Dataset test_data;
  // The flame generator declares a leading-train / trailing-test split; fits
  // train on the leading rows and score the rest.
  const bool has_test = cfg.data_path.empty() && cfg.problem == "flame_surrogate";
  if (has_test) {
    const clsm::FlameData fl =
        clsm::gen_flame_surrogate(cfg.generator_seed, cfg.n_samples);
    data = clsm::subset_rows(fl.data, fl.train_rows);
    test_data = clsm::subset_rows(fl.data, fl.test_rows);
  } else {
    data = resolve_dataset(cfg);
  }
  clsm::FeatureMatrix fm;
  if (cfg.ensemble.family == ModelFamily::kLinear)
    fm = clsm::build_feature_library(data, resolve_features(cfg, data));

  const clsm::FitResult fit = clsm::run_trials(data, fm, cfg.ensemble);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  nlohmann::json fit_json = clsm::fit_to_json(fit, cfg);

  std::string report_text;
  if (cfg.ensemble.family == ModelFamily::kLinear) {
    const clsm::EquationReport rep = clsm::report_equations(fit, data);
    report_text = clsm::render_report(rep, fit);
  } else {
    report_text = mlp_summary(fit);
  }
  if (has_test) {
    const std::vector<double> pred = clsm::composite_predict(
        fit, data, test_data.inputs_matrix(), clsm::PredictMode::kHard);
    double sse = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double r = pred[i] - test_data.observations[i].y;
      sse += r * r;
    }
    const double test_mse = sse / static_cast<double>(pred.size());
    fit_json["test_mse"] = test_mse;
    report_text += "held-out test MSE (hard routing, " +
                   std::to_string(test_data.size()) + " rows): " +
                   fmt17(test_mse) + "\n";
  }
  clsm::save_json(fit_json, (dir / "fit.json").string());
  clsm::write_assignments_csv(fit, (dir / "assignments.csv").string());
  write_text((dir / "report.txt").string(), report_text);

  std::cout << report_text;
  return 0;
}

int cmd_landscape(const std::string& out_dir, const std::string& subset_name,
                  std::uint64_t seed, int grid_points, double mu_min, double mu_max) {
  clsm::LandscapeSubset subset;
  if (subset_name == "all")
    subset = clsm::LandscapeSubset::kAll;
  else if (subset_name == "neg")
    subset = clsm::LandscapeSubset::kNegative;
  else if (subset_name == "nonneg")
    subset = clsm::LandscapeSubset::kNonNegative;
  else
    throw ConfigError("--subset must be one of all, neg, nonneg");
  if (grid_points < 1) throw ConfigError("--grid-points must be >= 1");
  if (!(mu_min <= mu_max)) throw ConfigError("--mu-min must be <= --mu-max");

  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i)
    grid[i] = grid_points == 1
                  ? mu_min
                  : mu_min + (mu_max - mu_min) * static_cast<double>(i) /
                                 static_cast<double>(grid_points - 1);

  const clsm::LandscapeResult res = clsm::loss_landscape(grid, subset, seed);

  std::filesystem::create_directories(out_dir);
  const std::string path =
      (std::filesystem::path(out_dir) / "landscape.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << "mu,mean_loss";
  for (std::size_t i = 1; i <= res.x.size(); ++i) out << ",l_" << i;
  out << "\n";
  for (std::size_t g = 0; g < res.mu.size(); ++g) {
    out << fmt17(res.mu[g]) << "," << fmt17(res.mean_loss[g]);
    for (std::size_t i = 0; i < res.x.size(); ++i)
      out << "," << fmt17(res.per_sample(g, i));
    out << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
  std::cout << "wrote " << res.mu.size() << " grid rows to " << path << "\n";
  return 0;
}

int cmd_report(const std::string& fit_path, const std::string& out_dir,
               double threshold) {
  const nlohmann::json j = clsm::load_json(fit_path);
  const clsm::FitResult fit = clsm::fit_from_json(j);
  if (!j.contains("config"))
    throw clsm::ParseError("fit.json: missing config echo");
  const RunConfig cfg = clsm::parse_run_config(j["config"]);
  const Dataset data = resolve_dataset(cfg);

  const clsm::EquationReport rep = clsm::report_equations(fit, data, threshold);
  const std::string text = clsm::render_report(rep, fit);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text((std::filesystem::path(out_dir) / "report.txt").string(), text);
  }
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"competitive learning of specialized models"};
  app.require_subcommand(1);

  std::string problem, out_dir = ".", config_path, subset = "all", fit_path;
  std::string report_out;
  std::uint64_t seed = 0;
  bool fd_targets = false;
  int n_samples = 2000, grid_points = 601;
  double mu_min = -3.0, mu_max = 3.0, threshold = 3e-3;
  int q_override = 0, trials_override = 0;
  long long seed_override = -1;

  CLI::App* gen = app.add_subcommand("generate", "write a benchmark dataset");
  gen->add_option("problem", problem,
                  "sinusoid | oscillator1 | oscillator2 | flame_surrogate | "
                  "landscape_demo")
      ->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out_dir, "output directory");
  gen->add_flag("--fd-targets", fd_targets,
                "oscillators: finite-difference accelerations instead of exact RHS");
  gen->add_option("--n-samples", n_samples, "flame surrogate sample count");

  CLI::App* fit = app.add_subcommand("fit", "train a competitive ensemble");
  fit->add_option("--config", config_path, "JSON run configuration")->required();
  fit->add_option("--out", out_dir, "output directory");
  fit->add_option("--q", q_override, "override q_models");
  fit->add_option("--trials", trials_override, "override trials");
  fit->add_option("--seed", seed_override, "override seed");

  CLI::App* land = app.add_subcommand("landscape", "per-sample loss curves over mu");
  land->add_option("--out", out_dir, "output directory");
  land->add_option("--subset", subset, "all | neg | nonneg");
  land->add_option("--seed", seed, "demo dataset seed");
  land->add_option("--grid-points", grid_points, "mu grid resolution");
  land->add_option("--mu-min", mu_min, "grid lower bound");
  land->add_option("--mu-max", mu_max, "grid upper bound");

  CLI::App* rep = app.add_subcommand("report", "re-render equations from a fit.json");
  rep->add_option("fit_json", fit_path, "path to fit.json")->required();
  rep->add_option("--out", report_out, "directory for report.txt (default: print only)");
  rep->add_option("--threshold", threshold, "coefficient display threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    clsm::apply_thread_env();
    if (gen->parsed())
      return cmd_generate(problem, seed, out_dir, fd_targets, n_samples);
    if (fit->parsed())
      return cmd_fit(config_path, out_dir, q_override, trials_override,
                     seed_override);
    if (land->parsed())
      return cmd_landscape(out_dir, subset, seed, grid_points, mu_min, mu_max);
    if (rep->parsed()) return cmd_report(fit_path, report_out, threshold);
  } catch (const clsm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const clsm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const clsm::TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
