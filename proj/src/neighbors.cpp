#include "clsm/neighbors.hpp"

#include <algorithm>
#include <cmath>

#include "clsm/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clsm {

namespace {

double sq_dist(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return acc;
}

// Selects the k smallest (distance, index) pairs; equal distances order by
// index so duplicates resolve toward the lower index.
void select_nearest(std::vector<std::pair<double, int>>& cand, int k) {
  auto cmp = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  };
  std::partial_sort(cand.begin(), cand.begin() + k, cand.end(), cmp);
}

}  // namespace

NeighborIndex build_neighbor_index(const Dataset& d, int n_neighbors,
                                   bool include_self) {
  const std::size_t s = d.size();
  if (n_neighbors < 1 || static_cast<std::size_t>(n_neighbors) > s)
    throw ConfigError("build_neighbor_index: n_neighbors must be in [1, " +
                      std::to_string(s) + "], got " + std::to_string(n_neighbors));
  if (!include_self && static_cast<std::size_t>(n_neighbors) >= s)
    throw ConfigError("build_neighbor_index: n_neighbors must be < S when the "
                      "query point is excluded");

  Matrix pts;
  if (d.scaling.has_value()) {
    pts = d.inputs_matrix();
  } else {
    pts = standardize(d).first.inputs_matrix();
  }
  const std::size_t n = pts.cols;

  NeighborIndex out;
  out.n_rows = s;
  out.n_neighbors = n_neighbors;
  out.idx.resize(s * static_cast<std::size_t>(n_neighbors));

#pragma omp parallel
  {
    std::vector<std::pair<double, int>> cand;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s); ++i) {
      cand.clear();
      cand.reserve(s);
      for (std::size_t j = 0; j < s; ++j) {
        if (!include_self && static_cast<std::size_t>(i) == j) continue;
        cand.emplace_back(sq_dist(pts.row(i), pts.row(j), n), static_cast<int>(j));
      }
      select_nearest(cand, n_neighbors);
      int* row = out.idx.data() + static_cast<std::size_t>(i) * n_neighbors;
      for (int k = 0; k < n_neighbors; ++k) row[k] = cand[k].second;
    }
  }
  return out;
}

std::vector<int> nearest_rows(const Matrix& std_inputs, const std::vector<double>& z,
                              int n) {
  if (z.size() != std_inputs.cols)
    throw ConfigError("nearest_rows: query dimension mismatch");
  if (n < 1 || static_cast<std::size_t>(n) > std_inputs.rows)
    throw ConfigError("nearest_rows: n out of range");
  std::vector<std::pair<double, int>> cand;
  cand.reserve(std_inputs.rows);
  for (std::size_t j = 0; j < std_inputs.rows; ++j)
    cand.emplace_back(sq_dist(std_inputs.row(j), z.data(), z.size()),
                      static_cast<int>(j));
  select_nearest(cand, n);
  std::vector<int> out(n);
  for (int k = 0; k < n; ++k) out[k] = cand[k].second;
  return out;
}

}  // namespace clsm
