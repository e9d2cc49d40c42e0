#include "clsm/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "clsm/common.hpp"

namespace clsm {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw ConfigError("config: field '" + field + "' " + why);
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown field '" + ctx + it.key() + "'");
}

double get_num(const json& j, const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) bad_field(key, "must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, int dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer()) bad_field(key, "must be an integer");
  return j[key].get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& key, std::uint64_t dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_unsigned()) bad_field(key, "must be a non-negative integer");
  return j[key].get<std::uint64_t>();
}

std::string get_str(const json& j, const std::string& key, const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_string()) bad_field(key, "must be a string");
  return j[key].get<std::string>();
}

const char* factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::kVar: return "var";
    case FactorKind::kSin: return "sin";
    case FactorKind::kCos: return "cos";
  }
  return "var";
}

FactorKind factor_kind_from(const std::string& s) {
  if (s == "var") return FactorKind::kVar;
  if (s == "sin") return FactorKind::kSin;
  if (s == "cos") return FactorKind::kCos;
  throw ParseError("feature spec: unknown factor kind '" + s + "'");
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json feature_spec_to_json(const FeatureSpec& spec) {
  json terms = json::array();
  for (const FeatureTerm& t : spec.terms) {
    json factors = json::array();
    for (const FeatureFactor& f : t.factors)
      factors.push_back({{"kind", factor_kind_name(f.kind)}, {"col", f.col}});
    terms.push_back({{"name", t.name}, {"factors", std::move(factors)}});
  }
  return {{"terms", std::move(terms)}};
}

FeatureSpec feature_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw ParseError("feature spec: expected an object with a 'terms' array");
  FeatureSpec spec;
  for (const json& tj : j["terms"]) {
    FeatureTerm t;
    t.name = tj.at("name").get<std::string>();
    for (const json& fj : tj.at("factors")) {
      FeatureFactor f;
      f.kind = factor_kind_from(fj.at("kind").get<std::string>());
      f.col = fj.at("col").get<int>();
      t.factors.push_back(f);
    }
    spec.terms.push_back(std::move(t));
  }
  return spec;
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: root must be a JSON object");
  check_keys(j,
             {"problem", "data", "features", "generator_seed", "n_samples",
              "family", "q_models", "kappa", "gamma", "n_neighbors", "lambda",
              "mu_s", "hidden", "outer_iters", "inner_steps", "trials", "seed",
              "optimizer"},
             "");

  RunConfig cfg;
  cfg.problem = get_str(j, "problem", "");
  cfg.data_path = get_str(j, "data", "");
  if (cfg.problem.empty() == cfg.data_path.empty())
    throw ConfigError("config: exactly one of 'problem' and 'data' is required");
  cfg.features = get_str(j, "features", "auto");
  cfg.generator_seed = get_u64(j, "generator_seed", 0);

  EnsembleConfig& e = cfg.ensemble;
  const std::string family = get_str(j, "family", "linear");
  if (family == "linear")
    e.family = ModelFamily::kLinear;
  else if (family == "mlp")
    e.family = ModelFamily::kMlp;
  else
    bad_field("family", "must be 'linear' or 'mlp'");

  e.q_models = get_int(j, "q_models", 2);
  e.competition.kappa = get_num(j, "kappa", e.competition.kappa);
  e.competition.gamma = get_num(j, "gamma", e.competition.gamma);
  e.competition.n_neighbors = get_int(j, "n_neighbors", 0);
  e.sparsity.lambda = get_num(j, "lambda", e.sparsity.lambda);
  e.sparsity.mu_s = get_num(j, "mu_s", e.sparsity.mu_s);
  e.outer_iters = get_int(j, "outer_iters", e.outer_iters);
  e.inner_steps = get_int(j, "inner_steps", e.inner_steps);
  e.trials = get_int(j, "trials", e.trials);
  e.seed = get_u64(j, "seed", 0);

  if (j.contains("hidden")) {
    if (!j["hidden"].is_array()) bad_field("hidden", "must be an array of widths");
    e.hidden.clear();
    for (const json& h : j["hidden"]) {
      if (!h.is_number_integer()) bad_field("hidden", "must contain integers");
      e.hidden.push_back(h.get<int>());
    }
  }

  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    if (!o.is_object()) bad_field("optimizer", "must be an object");
    const std::string type = get_str(o, "type", e.family == ModelFamily::kLinear
                                                    ? "newton"
                                                    : "adam");
    if (type == "newton") {
      check_keys(o, {"type", "eps_max", "clip_limit", "max_iters", "grad_tol"},
                 "optimizer.");
      if (o.contains("eps_max") && !o["eps_max"].is_null())
        e.newton.eps_max = get_num(o, "eps_max", 0.0);
      e.newton.clip_limit = get_num(o, "clip_limit", e.newton.clip_limit);
      e.newton.max_iters = get_int(o, "max_iters", e.newton.max_iters);
      e.newton.grad_tol = get_num(o, "grad_tol", e.newton.grad_tol);
    } else if (type == "adam") {
      check_keys(o,
                 {"type", "learning_rate", "beta1", "beta2", "epsilon",
                  "max_epochs", "batch_size"},
                 "optimizer.");
      e.adam.learning_rate = get_num(o, "learning_rate", e.adam.learning_rate);
      e.adam.beta1 = get_num(o, "beta1", e.adam.beta1);
      e.adam.beta2 = get_num(o, "beta2", e.adam.beta2);
      e.adam.epsilon = get_num(o, "epsilon", e.adam.epsilon);
      e.adam.max_epochs = get_int(o, "max_epochs", e.adam.max_epochs);
      e.adam.batch_size = get_int(o, "batch_size", e.adam.batch_size);
    } else {
      bad_field("optimizer.type", "must be 'newton' or 'adam'");
    }
  }

  const int n_samples = get_int(j, "n_samples", 2000);
  if (n_samples < 100) bad_field("n_samples", "must be >= 100");
  cfg.n_samples = static_cast<std::size_t>(n_samples);
  cfg.ensemble.validate();
  return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
  const EnsembleConfig& e = cfg.ensemble;
  json j;
  if (!cfg.problem.empty()) j["problem"] = cfg.problem;
  if (!cfg.data_path.empty()) j["data"] = cfg.data_path;
  j["features"] = cfg.features;
  j["generator_seed"] = cfg.generator_seed;
  if (cfg.problem == "flame_surrogate") j["n_samples"] = cfg.n_samples;
  j["family"] = e.family == ModelFamily::kLinear ? "linear" : "mlp";
  j["q_models"] = e.q_models;
  j["kappa"] = e.competition.kappa;
  j["gamma"] = e.competition.gamma;
  j["n_neighbors"] = e.competition.n_neighbors;
  j["outer_iters"] = e.outer_iters;
  j["inner_steps"] = e.inner_steps;
  j["trials"] = e.trials;
  j["seed"] = e.seed;
  if (e.family == ModelFamily::kLinear) {
    j["lambda"] = e.sparsity.lambda;
    j["mu_s"] = e.sparsity.mu_s;
    json o;
    o["type"] = "newton";
    if (e.newton.eps_max)
      o["eps_max"] = *e.newton.eps_max;
    else
      o["eps_max"] = nullptr;
    o["clip_limit"] = e.newton.clip_limit;
    o["max_iters"] = e.newton.max_iters;
    o["grad_tol"] = e.newton.grad_tol;
    j["optimizer"] = std::move(o);
  } else {
    j["hidden"] = e.hidden;
    j["optimizer"] = {{"type", "adam"},
                      {"learning_rate", e.adam.learning_rate},
                      {"beta1", e.adam.beta1},
                      {"beta2", e.adam.beta2},
                      {"epsilon", e.adam.epsilon},
                      {"max_epochs", e.adam.max_epochs},
                      {"batch_size", e.adam.batch_size}};
  }
  return j;
}

json fit_to_json(const FitResult& fit, const RunConfig& cfg) {
  json j;
  j["config"] = run_config_to_json(cfg);
  j["trial_seed"] = fit.trial_seed;
  j["converged"] = fit.converged;
  j["outer_iters_run"] = fit.outer_iters_run;
  j["n_neighbors"] = fit.n_neighbors;
  j["loss_history"] = fit.loss_history;
  j["labels"] = fit.labels;
  j["scaling"] = {{"mean", fit.scaling.mean}, {"std", fit.scaling.std}};
  if (!fit.models.empty() && fit.models.front().family == ModelFamily::kLinear)
    j["feature_spec"] = feature_spec_to_json(fit.feature_spec);
  j["alpha_bar"] = matrix_rows(fit.weights.alpha_bar);

  json models = json::array();
  for (const TrainedModel& m : fit.models) {
    if (m.family == ModelFamily::kLinear) {
      models.push_back({{"family", "linear"}, {"beta", m.beta}});
    } else {
      models.push_back({{"family", "mlp"},
                        {"widths", m.mlp.widths()},
                        {"params", m.mlp.flatten()}});
    }
  }
  j["models"] = std::move(models);
  return j;
}

FitResult fit_from_json(const json& j) {
  FitResult fit;
  try {
    fit.trial_seed = j.at("trial_seed").get<std::uint64_t>();
    fit.converged = j.at("converged").get<bool>();
    fit.outer_iters_run = j.at("outer_iters_run").get<int>();
    fit.n_neighbors = j.at("n_neighbors").get<int>();
    fit.loss_history = j.at("loss_history").get<std::vector<double>>();
    fit.labels = j.at("labels").get<std::vector<int>>();
    fit.scaling.mean = j.at("scaling").at("mean").get<std::vector<double>>();
    fit.scaling.std = j.at("scaling").at("std").get<std::vector<double>>();
    if (j.contains("feature_spec"))
      fit.feature_spec = feature_spec_from_json(j["feature_spec"]);

    const json& ab = j.at("alpha_bar");
    const std::size_t rows = ab.size();
    const std::size_t cols = rows ? ab[0].size() : 0;
    fit.weights.alpha_bar = Matrix(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < cols; ++k)
        fit.weights.alpha_bar(i, k) = ab[i][k].get<double>();

    for (const json& mj : j.at("models")) {
      TrainedModel m;
      const std::string family = mj.at("family").get<std::string>();
      if (family == "linear") {
        m.family = ModelFamily::kLinear;
        m.beta = mj.at("beta").get<std::vector<double>>();
      } else if (family == "mlp") {
        m.family = ModelFamily::kMlp;
        const std::vector<int> widths = mj.at("widths").get<std::vector<int>>();
        Rng dummy(0);
        m.mlp = make_mlp(widths, dummy);
        m.mlp.unflatten(mj.at("params").get<std::vector<double>>());
      } else {
        throw ParseError("fit.json: unknown model family '" + family + "'");
      }
      fit.models.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("fit.json: ") + e.what());
  }
  return fit;
}

json problem_truth(const std::string& problem) {
  json j;
  j["problem"] = problem;
  if (problem == "sinusoid") {
    j["scan_column"] = 0;
    j["boundaries"] = {0.0};
    j["regimes"] = {{{"domain", "x <= 0"}, {"terms", {{"sin(x)", 0.2}}}},
                    {{"domain", "x > 0"}, {"terms", {{"x*cos(x)", 0.1}}}}};
    j["noise_std"] = 0.1;
  } else if (problem == "oscillator1") {
    j["scan_column"] = 2;
    j["boundaries"] = {2.0};
    j["regimes"] = {{{"domain", "t <= 2"},
                     {"terms",
                      {{"y", -3.2}, {"dy", -0.05 / 0.75}, {"t", 2.0 / 0.75}}}},
                    {{"domain", "t > 2"},
                     {"terms", {{"y", -3.2}, {"dy", -0.05 / 0.75}}}}};
  } else if (problem == "oscillator2") {
    j["scan_column"] = 0;
    j["boundaries"] = {0.25};
    j["regimes"] = {
        {{"domain", "y <= 0.25"},
         {"terms", {{"y", -10.0}, {"dy", -0.25}, {"t", 0.1}}}},
        {{"domain", "y > 0.25"},
         {"terms", {{"y", -15.0}, {"dy", -0.40}, {"t", 0.1}, {"1", 1.25}}}}};
  } else if (problem == "flame_surrogate") {
    j["scan_column"] = 2;
    j["boundaries"] = {1.0};
    j["formula"] = "s_L = 0.4 (T/300)^1.8 p^-0.4 * g(phi); "
                   "g = 8(phi-0.5)^3 below phi=1, exp(-1.8(phi-1)) above";
    j["noise_std"] = 1e-3;
  } else if (problem == "landscape_demo") {
    j["scan_column"] = 0;
    j["boundaries"] = {0.0};
    j["regimes"] = {{{"domain", "x < 0"}, {"mu", -1.0}},
                    {{"domain", "x >= 0"}, {"mu", 2.0}}};
  } else {
    throw ConfigError("unknown problem '" + problem + "'");
  }
  return j;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

void write_assignments_csv(const FitResult& fit, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  const std::size_t q = fit.models.size();
  out << "index,label";
  for (std::size_t k = 1; k <= q; ++k) out << ",alpha_bar_" << k;
  out << ",prediction\n";
  for (std::size_t i = 0; i < fit.labels.size(); ++i) {
    out << i << "," << fit.labels[i];
    for (std::size_t k = 0; k < q; ++k)
      out << "," << fmt17(fit.weights.alpha_bar(i, k));
    out << ","
        << fmt17(fit.predictions(i, static_cast<std::size_t>(fit.labels[i])))
        << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace clsm
