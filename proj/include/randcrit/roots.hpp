#pragma once

#include <span>
#include <vector>

#include "randcrit/common.hpp"

namespace randcrit {

struct RootSet {
  std::vector<cplx> roots;
  // |f(r)| / max(1, |r|)^N, i.e. the residual of the homogenised polynomial
  std::vector<double> residuals;
  int iterations = 0;
  bool converged = true;

  double max_residual() const;
};

// All complex roots of sum c_i z^i by Aberth-Ehrlich iteration started from
// the Newton-polygon radii, then one Newton polishing step per root.
// Trailing coefficients below 1e-14 * max|c_i| are dropped first.
RootSet find_roots(std::span<const cplx> coefficients);

// Residual bound every RootSet is expected to meet.
double residual_bound(std::span<const cplx> coefficients);

}  // namespace randcrit
