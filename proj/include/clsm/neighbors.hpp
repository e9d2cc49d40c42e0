#pragma once

#include <cstddef>
#include <vector>

#include "clsm/dataset.hpp"

namespace clsm {

// Exact k-nearest-neighbor table: row i lists the n_neighbors observation
// indices closest to observation i by Euclidean distance in standardized
// input space. Ties break toward the lower index.
struct NeighborIndex {
  std::size_t n_rows = 0;
  int n_neighbors = 0;
  std::vector<int> idx;  // n_rows x n_neighbors, row-major

  const int* row(std::size_t i) const { return idx.data() + i * n_neighbors; }
};

// Brute-force exact kNN over the dataset inputs. If `d` carries scaling
// metadata its inputs are taken as already standardized; otherwise a
// standardized copy is made internally. The query point itself counts as
// its own neighbor when include_self is set (the default).
NeighborIndex build_neighbor_index(const Dataset& d, int n_neighbors,
                                   bool include_self = true);

// Indices of the `n` training rows nearest to a single standardized query
// point (same metric and tie rule as the index).
std::vector<int> nearest_rows(const Matrix& std_inputs, const std::vector<double>& z,
                              int n);

}  // namespace clsm
