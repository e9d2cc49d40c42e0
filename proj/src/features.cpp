#include "clsm/features.hpp"

#include <cmath>

#include "clsm/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clsm {

double FeatureTerm::eval(const double* x) const {
  double v = 1.0;
  for (const auto& f : factors) {
    const double xi = x[f.col];
    switch (f.kind) {
      case FactorKind::kVar: v *= xi; break;
      case FactorKind::kSin: v *= std::sin(xi); break;
      case FactorKind::kCos: v *= std::cos(xi); break;
    }
  }
  return v;
}

int FeatureSpec::bias_index() const {
  for (std::size_t j = 0; j < terms.size(); ++j)
    if (terms[j].is_bias()) return static_cast<int>(j);
  return -1;
}

std::vector<std::string> FeatureSpec::names() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.name);
  return out;
}

void FeatureSpec::validate(std::size_t n_vars) const {
  if (terms.empty()) throw ConfigError("feature spec: term list is empty");
  int bias_count = 0;
  for (const auto& t : terms) {
    if (t.is_bias()) ++bias_count;
    for (const auto& f : t.factors) {
      if (f.col < 0 || static_cast<std::size_t>(f.col) >= n_vars)
        throw ConfigError("feature spec: term '" + t.name +
                          "' references input column " + std::to_string(f.col) +
                          " outside [0, " + std::to_string(n_vars) + ")");
    }
  }
  if (bias_count > 1) throw ConfigError("feature spec: more than one bias term");
}

FeatureMatrix build_feature_library(const Dataset& d, const FeatureSpec& spec) {
  spec.validate(d.n_vars());
  const std::size_t s = d.size();
  const std::size_t p = spec.count();
  FeatureMatrix fm;
  fm.spec = spec;
  fm.values = Matrix(s, p);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s); ++i) {
    const double* x = d.observations[i].x.data();
    double* row = fm.values.row(i);
    for (std::size_t j = 0; j < p; ++j) row[j] = spec.terms[j].eval(x);
  }
  return fm;
}

std::vector<double> eval_features(const FeatureSpec& spec, const std::vector<double>& x) {
  spec.validate(x.size());
  std::vector<double> out(spec.count());
  for (std::size_t j = 0; j < spec.count(); ++j) out[j] = spec.terms[j].eval(x.data());
  return out;
}

FeatureTerm var_term(int col, const std::string& name) {
  return {name, {{FactorKind::kVar, col}}};
}
FeatureTerm sin_term(int col, const std::string& name) {
  return {name, {{FactorKind::kSin, col}}};
}
FeatureTerm cos_term(int col, const std::string& name) {
  return {name, {{FactorKind::kCos, col}}};
}
FeatureTerm product_term(std::vector<FeatureFactor> factors, const std::string& name) {
  return {name, std::move(factors)};
}
FeatureTerm bias_term() { return {"1", {}}; }

FeatureSpec sinusoid_feature_spec() {
  FeatureSpec spec;
  spec.terms = {
      var_term(0, "x"),
      sin_term(0, "sin(x)"),
      cos_term(0, "cos(x)"),
      product_term({{FactorKind::kVar, 0}, {FactorKind::kSin, 0}}, "x*sin(x)"),
      product_term({{FactorKind::kSin, 0}, {FactorKind::kCos, 0}}, "sin(x)*cos(x)"),
      product_term({{FactorKind::kVar, 0}, {FactorKind::kCos, 0}}, "x*cos(x)"),
      bias_term(),
  };
  return spec;
}

FeatureSpec oscillator_feature_spec() {
  FeatureSpec spec;
  spec.terms = {
      var_term(0, "y"),
      var_term(1, "dy"),
      var_term(2, "t"),
      bias_term(),
  };
  return spec;
}

// Quadratic cross terms make the weighted normal equations nearly singular on
// short trajectory arcs, so this richer library is opt-in.
FeatureSpec oscillator_quadratic_feature_spec() {
  FeatureSpec spec = oscillator_feature_spec();
  spec.terms.pop_back();
  spec.terms.push_back(
      product_term({{FactorKind::kVar, 0}, {FactorKind::kVar, 0}}, "y^2"));
  spec.terms.push_back(
      product_term({{FactorKind::kVar, 1}, {FactorKind::kVar, 1}}, "dy^2"));
  spec.terms.push_back(
      product_term({{FactorKind::kVar, 0}, {FactorKind::kVar, 1}}, "y*dy"));
  spec.terms.push_back(bias_term());
  return spec;
}

}  // namespace clsm
