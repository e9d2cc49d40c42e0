#pragma once

#include <string>

#include <json.hpp>

#include "clsm/features.hpp"
#include "clsm/trainer.hpp"

namespace clsm {

// Parsed `fit` configuration: where the data comes from plus the ensemble
// settings. Exactly one of problem/data_path is set.
struct RunConfig {
  std::string problem;
  std::string data_path;
  std::string features = "auto";  // "sinusoid", "oscillator",
                                  // "oscillator-quadratic", or a spec.json path
  std::uint64_t generator_seed = 0;
  std::size_t n_samples = 2000;   // flame surrogate only
  EnsembleConfig ensemble;
};

nlohmann::json feature_spec_to_json(const FeatureSpec& spec);
FeatureSpec feature_spec_from_json(const nlohmann::json& j);

// Strict schema: unknown or ill-typed fields raise ConfigError naming the
// field. See README for the full key list.
RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);

// fit.json payload: config echo, trained models, final smoothed weights,
// labels, loss history, scaling. Everything composite_predict needs.
nlohmann::json fit_to_json(const FitResult& fit, const RunConfig& cfg);
FitResult fit_from_json(const nlohmann::json& j);

// Ground-truth sidecar for a named benchmark problem (regime coefficient
// tables and expected boundaries).
nlohmann::json problem_truth(const std::string& problem);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

// assignments.csv: index, label, smoothed weight row, winning prediction.
void write_assignments_csv(const FitResult& fit, const std::string& path);

}  // namespace clsm
