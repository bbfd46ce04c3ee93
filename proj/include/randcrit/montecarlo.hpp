#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "randcrit/ensembles.hpp"
#include "randcrit/kacrice.hpp"
#include "randcrit/roots.hpp"

namespace randcrit {

// Histogram of sampled zeros. Roots outside the window land in `overflow`,
// so sum(counts) + overflow == n_samples * degree.
struct EmpiricalDensity {
  GridSpec grid;
  std::vector<std::int64_t> counts;
  std::vector<double> density;  // counts / (n_samples * cell_area)
  std::vector<double> stderr_;  // standard error of density, per cell
  std::int64_t overflow = 0;
  std::int64_t n_samples = 0;
  int degree = 0;
  double max_residual_ratio = 0.0;  // worst residual / residual_bound seen
};

EmpiricalDensity empirical_zero_density(const EnsembleSpec& e,
                                        std::int64_t n_samples,
                                        const GridSpec& grid,
                                        std::uint64_t seed, int threads = 1);

// Header `x,y,count,density,stderr`.
void write_csv(std::ostream& out, const EmpiricalDensity& d);

struct RealZeroOptions {
  double imag_tolerance = 1e-8;  // |Im r| <= tol * (1 + |r|) counts as real
  double coefficient_scale = 1.0;
  int threads = 1;
};

struct RealZeroEstimate {
  double mean;
  double stderr_;
  std::int64_t n_samples;
};

// Real-coefficient polynomials with i.i.d. standard normal c_i.
RealZeroEstimate empirical_real_zero_count(int degree, std::int64_t n_samples,
                                           std::uint64_t seed,
                                           const RealZeroOptions& opts = {});

// The real-coefficient sample used above, exposed for tests.
std::vector<double> sample_real_polynomial(int degree, std::uint64_t seed,
                                           std::uint64_t index);

int count_real_roots(const RootSet& roots, double imag_tolerance);

}  // namespace randcrit
