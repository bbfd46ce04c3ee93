#pragma once

#include <algorithm>

#include <iosfwd>
#include <limits>
#include <variant>
#include <vector>

#include "randcrit/ensembles.hpp"

namespace randcrit {

// Expected density of complex zeros per unit area, (1/pi) d dbar log G(z, zbar),
// from the closed forms for the Kac and Kostlan ensembles.
double complex_zero_density(const EnsembleSpec& e, cplx z);

// Same quantity from a central finite-difference Laplacian of log G with
// step h, evaluated generically from the variances. The Richardson check
// compares against step 2h.
struct FiniteDifferenceDensity {
  double value;
  double value_2h;
  double relative_gap;
  bool ill_conditioned;  // relative_gap > 1e-4
};
FiniteDifferenceDensity complex_zero_density_fd(const EnsembleSpec& e, cplx z,
                                                double h = 1e-4);

// h_N(x) = 1/(1-x)^2 - (N+1)^2 x^N / (1-x^{N+1})^2 for x = |z|^2 >= 0.
// Equals Var(k)/x for k in {0..N} weighted by x^k, which is the form used
// when |1-x| < kac_limit_band(N): the closed form cancels like
// eps / (N |1-x|)^3 there.
inline constexpr double kKacLimitBand = 1e-3;
inline double kac_limit_band(int degree) {
  return degree > 0 ? std::max(kKacLimitBand, 1.0 / degree) : kKacLimitBand;
}
double kac_profile(int degree, double x);
double kac_profile_limit_form(int degree, double x);

// Kac's density of real zeros for real Gaussian coefficients of unit variance.
double real_zero_density(int degree, double t);

// Expected number of real zeros over the whole real line.
double expected_real_zeros(int degree);

struct Annulus {
  double r0 = 0.0;
  double r1 = std::numeric_limits<double>::infinity();
};
struct Rectangle {
  double x0, x1, y0, y1;
};
using PlaneRegion = std::variant<Annulus, Rectangle>;

// Expected number of zeros in the region. Every diagonal ensemble has a
// radial density, so annuli reduce to one radial integral.
double region_mass(const EnsembleSpec& e, const PlaneRegion& region,
                   double rel_tol = 1e-5);

struct GridSpec {
  double x0, x1;
  int nx;
  double y0, y1;
  int ny;

  double cell_width() const { return (x1 - x0) / nx; }
  double cell_height() const { return (y1 - y0) / ny; }
  double cell_area() const { return cell_width() * cell_height(); }
  double x_center(int ix) const { return x0 + (ix + 0.5) * cell_width(); }
  double y_center(int iy) const { return y0 + (iy + 0.5) * cell_height(); }
  // Row-major cell index or -1 when outside the window.
  int cell_of(cplx z) const;
};

GridSpec square_grid(double lo, double hi, int bins);

// Analytic density sampled at cell centres, row-major (y outer).
struct DensityGrid {
  GridSpec grid;
  std::vector<double> density;
  double total_mass() const;
};

DensityGrid density_grid(const EnsembleSpec& e, const GridSpec& grid,
                         int threads = 1);

// Header `x,y,density`.
void write_csv(std::ostream& out, const DensityGrid& g);

}  // namespace randcrit
