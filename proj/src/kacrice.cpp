#include "randcrit/kacrice.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "randcrit/io.hpp"
#include "randcrit/parallel.hpp"
#include "randcrit/quadrature.hpp"

namespace randcrit {

double kac_profile_limit_form(int degree, double x) {
  const double lx = std::log(x);
  const double shift = std::max(0.0, degree * lx);
  double w_sum = 0.0, k_sum = 0.0;
  for (int k = 0; k <= degree; ++k) {
    const double w = std::exp(k * lx - shift);
    w_sum += w;
    k_sum += k * w;
  }
  const double mean = k_sum / w_sum;
  double var = 0.0;
  for (int k = 0; k <= degree; ++k) {
    const double d = k - mean;
    var += d * d * std::exp(k * lx - shift);
  }
  return var / w_sum / x;
}

double kac_profile(int degree, double x) {
  if (std::abs(1.0 - x) < kac_limit_band(degree)) return kac_profile_limit_form(degree, x);
  const double n1 = degree + 1.0;
  const double lead = 1.0 / ((1.0 - x) * (1.0 - x));
  double tail;
  if (x < 1.0) {
    const double xn = ipow(x, degree);
    const double den = 1.0 - xn * x;
    tail = n1 * n1 * xn / (den * den);
  } else {
    const double y = 1.0 / x;
    const double yn1 = ipow(y, degree + 1);
    const double den = 1.0 - yn1;
    tail = n1 * n1 * yn1 * y / (den * den);
  }
  return lead - tail;
}

double complex_zero_density(const EnsembleSpec& e, cplx z) {
  if (!is_finite(z)) {
    throw Error(ErrorCode::NonFiniteInput, "density point must be finite");
  }
  const double x = std::norm(z);
  switch (e.kind) {
    case EnsembleKind::Kac:
      return kac_profile(e.degree, x) / kPi;
    case EnsembleKind::Kostlan:
      return e.degree / (kPi * (1.0 + x) * (1.0 + x));
  }
  return 0.0;
}

namespace {

// G(z, zbar) = sum v_i |z|^{2i}, Horner in |z|^2.
double diagonal_kernel(const EnsembleSpec& e, cplx z) {
  const double x = std::norm(z);
  double acc = 0.0;
  for (auto it = e.variances.rbegin(); it != e.variances.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

double fd_density(const EnsembleSpec& e, cplx z, double h) {
  const double g0 = diagonal_kernel(e, z);
  double sum = 0.0;
  for (cplx step : {cplx(h, 0), cplx(-h, 0), cplx(0, h), cplx(0, -h)}) {
    sum += std::log(diagonal_kernel(e, z + step) / g0);
  }
  // d dbar = Laplacian / 4
  return sum / (h * h) / (4.0 * kPi);
}

}  // namespace

FiniteDifferenceDensity complex_zero_density_fd(const EnsembleSpec& e, cplx z,
                                                double h) {
  if (!is_finite(z)) {
    throw Error(ErrorCode::NonFiniteInput, "density point must be finite");
  }
  FiniteDifferenceDensity r{};
  r.value = fd_density(e, z, h);
  r.value_2h = fd_density(e, z, 2.0 * h);
  r.relative_gap = std::abs(r.value - r.value_2h) / std::abs(r.value);
  r.ill_conditioned = r.relative_gap > 1e-4;
  return r;
}

double real_zero_density(int degree, double t) {
  if (!std::isfinite(t)) {
    throw Error(ErrorCode::NonFiniteInput, "real density point must be finite");
  }
  const double h = kac_profile(degree, t * t);
  if (h < 0.0) {
    const double scale = std::max(1.0, 1.0 / ((1.0 - t * t) * (1.0 - t * t)));
    if (h < -1e-12 * scale) {
      std::ostringstream msg;
      msg << "negative Kac radicand " << h << " at t = " << t << ", N = " << degree;
      throw Error(ErrorCode::NumericalInconsistency, msg.str());
    }
    return 0.0;
  }
  return std::sqrt(h) / kPi;
}

namespace {

std::vector<double> unit_circle_breaks(int degree, bool below, bool above) {
  std::vector<double> b{1.0};
  for (double k : {0.5, 2.0, 8.0, 32.0, 128.0}) {
    const double d = k / degree;
    if (d >= 0.5) continue;
    if (below) b.push_back(1.0 - d);
    if (above) b.push_back(1.0 + d);
  }
  return b;
}

}  // namespace

double expected_real_zeros(int degree) {
  if (degree < 1) {
    throw Error(ErrorCode::InvalidDegree, "degree must be >= 1");
  }
  // rho is even, and rho(1/t)/t^2 = rho(t), so the line integral is four
  // times the integral over [0, 1].
  auto rho = [degree](double t) { return real_zero_density(degree, t); };
  auto breaks = unit_circle_breaks(degree, true, false);
  breaks.push_back(0.5);
  const auto r = integrate(rho, 0.0, 1.0, 1e-8, 2.5e-7, breaks);
  return 4.0 * r.value;
}

namespace {

double annulus_mass(const EnsembleSpec& e, double r0, double r1, double rel_tol) {
  auto radial = [&](double r) { return 2.0 * kPi * r * complex_zero_density(e, r); };
  const double abs_tol = 1e-12 * e.degree;
  const auto breaks = unit_circle_breaks(e.degree, true, true);
  if (std::isfinite(r1)) {
    return integrate(radial, r0, r1, rel_tol, abs_tol, breaks).value;
  }
  // tail beyond R via r = 1/s
  const double split = std::max(r0, 1.0);
  double mass = 0.0;
  if (split > r0) mass += integrate(radial, r0, split, rel_tol, abs_tol, breaks).value;
  auto tail = [&](double s) {
    return 2.0 * kPi * complex_zero_density(e, 1.0 / s) / (s * s * s);
  };
  const auto tail_breaks = unit_circle_breaks(e.degree, true, false);
  mass += integrate(tail, 0.0, 1.0 / split, rel_tol, abs_tol, tail_breaks).value;
  return mass;
}

double rectangle_mass(const EnsembleSpec& e, const Rectangle& r, double rel_tol) {
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) return 0.0;
  const auto radii = unit_circle_breaks(e.degree, true, true);
  auto inner = [&](double x) {
    std::vector<double> ybreaks{0.0};
    for (double rad : radii) {
      if (rad > std::abs(x)) {
        const double y = std::sqrt(rad * rad - x * x);
        ybreaks.push_back(y);
        ybreaks.push_back(-y);
      }
    }
    auto fy = [&](double y) { return complex_zero_density(e, cplx(x, y)); };
    return integrate(fy, r.y0, r.y1, rel_tol * 0.1, 1e-13, ybreaks).value;
  };
  std::vector<double> xbreaks{0.0};
  for (double rad : radii) {
    xbreaks.push_back(rad);
    xbreaks.push_back(-rad);
  }
  return integrate(inner, r.x0, r.x1, rel_tol, 1e-12, xbreaks).value;
}

}  // namespace

double region_mass(const EnsembleSpec& e, const PlaneRegion& region,
                   double rel_tol) {
  if (const auto* a = std::get_if<Annulus>(&region)) {
    if (a->r0 < 0.0 || !(a->r1 >= a->r0)) {
      throw Error(ErrorCode::DomainError, "annulus needs 0 <= r0 <= r1");
    }
    if (a->r1 == a->r0) return 0.0;
    return annulus_mass(e, a->r0, a->r1, rel_tol);
  }
  return rectangle_mass(e, std::get<Rectangle>(region), rel_tol);
}

int GridSpec::cell_of(cplx z) const {
  const double fx = (z.real() - x0) / cell_width();
  const double fy = (z.imag() - y0) / cell_height();
  if (!(fx >= 0.0 && fx < nx && fy >= 0.0 && fy < ny)) return -1;
  return static_cast<int>(fy) * nx + static_cast<int>(fx);
}

GridSpec square_grid(double lo, double hi, int bins) {
  if (!(hi > lo) || bins < 1) {
    throw Error(ErrorCode::InvalidConfig, "grid needs lo < hi and bins >= 1");
  }
  return {lo, hi, bins, lo, hi, bins};
}

double DensityGrid::total_mass() const {
  double s = 0.0;
  for (double d : density) s += d;
  return s * grid.cell_area();
}

DensityGrid density_grid(const EnsembleSpec& e, const GridSpec& grid,
                         int threads) {
  DensityGrid out{grid, std::vector<double>(static_cast<std::size_t>(grid.nx) * grid.ny)};
  for_each_chunk(static_cast<std::size_t>(grid.ny), 1, threads,
                 [&](std::size_t, std::size_t iy, std::size_t) {
                   for (int ix = 0; ix < grid.nx; ++ix) {
                     out.density[iy * grid.nx + ix] = complex_zero_density(
                         e, cplx(grid.x_center(ix), grid.y_center(static_cast<int>(iy))));
                   }
                 });
  return out;
}

void write_csv(std::ostream& out, const DensityGrid& g) {
  out << "x,y,density\n";
  for (int iy = 0; iy < g.grid.ny; ++iy) {
    for (int ix = 0; ix < g.grid.nx; ++ix) {
      out << format_number(g.grid.x_center(ix)) << ','
          << format_number(g.grid.y_center(iy)) << ','
          << format_number(g.density[static_cast<std::size_t>(iy) * g.grid.nx + ix])
          << '\n';
    }
  }
}

}  // namespace randcrit
