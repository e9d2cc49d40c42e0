#pragma once

#include <vector>

#include "clsm/matrix.hpp"

namespace clsm {

// Loss, gradient, and (for linear models) Hessian of a weighted objective
// at one parameter point. hessian.rows == 0 means "not provided".
struct WeightedLossReport {
  double loss = 0.0;
  std::vector<double> grad;
  Matrix hessian;

  bool has_hessian() const { return hessian.rows > 0; }
};

}  // namespace clsm
