#pragma once

#include <string>
#include <vector>

#include "clsm/dataset.hpp"
#include "clsm/matrix.hpp"

namespace clsm {

// A candidate-library term is a product of primitive factors, each acting
// on one input column: the column value itself, sin of it, or cos of it.
// Monomials are repeated kVar factors; the empty product is the bias term.
enum class FactorKind { kVar, kSin, kCos };

struct FeatureFactor {
  FactorKind kind = FactorKind::kVar;
  int col = 0;
};

struct FeatureTerm {
  std::string name;
  std::vector<FeatureFactor> factors;

  bool is_bias() const { return factors.empty(); }
  double eval(const double* x) const;
};

struct FeatureSpec {
  std::vector<FeatureTerm> terms;

  std::size_t count() const { return terms.size(); }
  // Index of the bias term, or -1 when absent.
  int bias_index() const;
  std::vector<std::string> names() const;
  // Checks the term list is non-empty, has at most one bias term, and
  // references only columns in [0, n_vars).
  void validate(std::size_t n_vars) const;
};

struct FeatureMatrix {
  Matrix values;  // S x P
  FeatureSpec spec;
};

// Evaluates every term of `spec` on every observation of `d`.
FeatureMatrix build_feature_library(const Dataset& d, const FeatureSpec& spec);

// Evaluates one input row against the spec (used for fresh predictions).
std::vector<double> eval_features(const FeatureSpec& spec, const std::vector<double>& x);

// Term constructors for the common cases.
FeatureTerm var_term(int col, const std::string& name);
FeatureTerm sin_term(int col, const std::string& name);
FeatureTerm cos_term(int col, const std::string& name);
FeatureTerm product_term(std::vector<FeatureFactor> factors, const std::string& name);
FeatureTerm bias_term();

// The trig library used by the piecewise-sinusoid benchmark:
// {x, sin(x), cos(x), x sin(x), sin(x)cos(x), x cos(x), bias}.
FeatureSpec sinusoid_feature_spec();

// The state library used by the oscillator benchmarks on inputs (y, dy, t):
// {y, dy, t, bias}.
FeatureSpec oscillator_feature_spec();

// Extended oscillator library with quadratic cross terms:
// {y, dy, t, y^2, dy^2, y*dy, bias}.
FeatureSpec oscillator_quadratic_feature_spec();

}  // namespace clsm
