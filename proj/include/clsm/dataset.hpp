#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clsm/matrix.hpp"

namespace clsm {

// One observation: input vector x (length n_v, problem units) and scalar
// target y. All entries must be finite.
struct Observation {
  std::vector<double> x;
  double y = 0.0;
};

// Per-column standardization metadata. std entries are strictly positive;
// zero-variance columns are recorded with std = 1.
struct ScalingParams {
  std::vector<double> mean;
  std::vector<double> std;

  // (x - mean) / std, elementwise.
  std::vector<double> apply(const std::vector<double>& x) const;
  // mean + std * z, elementwise.
  std::vector<double> invert(const std::vector<double>& z) const;
};

struct Dataset {
  std::vector<Observation> observations;
  std::optional<ScalingParams> scaling;  // present once standardized

  std::size_t size() const { return observations.size(); }
  std::size_t n_vars() const {
    return observations.empty() ? 0 : observations.front().x.size();
  }

  // Inputs flattened to an S x n_v matrix (row i = observation i).
  Matrix inputs_matrix() const;
  std::vector<double> targets() const;
};

// Copy of the listed rows, in the listed order. Scaling metadata is not
// carried over.
Dataset subset_rows(const Dataset& d, const std::vector<std::size_t>& rows);

// Parses the CSV interchange format: header "x1,...,xn,y", decimal floats,
// one observation per row. Throws ParseError naming the offending row on
// any malformed cell or inconsistent column count.
Dataset load_dataset(const std::string& path);

// Writes the same format (LF line endings, round-trip-exact floats).
void save_dataset(const Dataset& d, const std::string& path);

// Returns a copy with each input column shifted to mean 0 and scaled to
// population std 1 (columns with zero variance become all zeros and are
// recorded with std = 1). Targets are untouched.
std::pair<Dataset, ScalingParams> standardize(const Dataset& d);

// Applies existing parameters to a raw dataset (used when routing new
// points through a trained fit).
Dataset apply_scaling(const Dataset& d, const ScalingParams& params);

// Generic numeric CSV writer: header columns, then rows of `m`.
void write_matrix_csv(const Matrix& m, const std::vector<std::string>& header,
                      const std::string& path);

}  // namespace clsm
