#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "randcrit/common.hpp"

namespace randcrit {

// Toy special-geometry models with closed-form periods.
//
//  CubicPrepotential(kappa): prepotential F = -kappa (X^1)^3 / (6 X^0) in the
//    gauge X^0 = 1, modulus z with Im z > 0. Period vector ordering
//      Pi = (X^0, X^1, F_1, F_0) = (1, z, -kappa z^2 / 2, kappa z^3 / 6)
//    with intersection form eta_{03} = eta_{12} = +1 (antisymmetric).
//  RigidFlux: b3 = 2, Pi = (1, -i), eta = [[0, 1], [-1, 0]]; the only
//    modulus is the dilaton-axion tau, Im tau > 0.
//
// Both share e^{-K_period} = i Pi^dagger eta Pi > 0; the rigid model adds
// the Kahler potential -log Im tau. Wedge products are
// int alpha ^ beta = alpha^T eta beta throughout.
enum class ModelKind { CubicPrepotential, RigidFlux };

inline constexpr double kDomainMargin = 1e-6;

struct ModuliPoint {
  cplx u;  // z for the cubic model, tau for the rigid model
};

struct ChargeVector {
  std::vector<long long> gamma;
};

struct FluxVector {
  std::vector<long long> f;
  std::vector<long long> h;
};

using Source = std::variant<ChargeVector, FluxVector>;

// Coordinate rectangle in the upper half plane.
struct Region {
  double x0 = 0, x1 = 0, y0 = 1, y1 = 1;

  bool empty() const { return !(x1 > x0) || !(y1 > y0); }
  bool contains(cplx u) const {
    return u.real() >= x0 && u.real() <= x1 && u.imag() >= y0 && u.imag() <= y1;
  }
  double area() const { return empty() ? 0.0 : (x1 - x0) * (y1 - y0); }
};

class PeriodModel {
 public:
  static PeriodModel cubic(double kappa);
  static PeriodModel rigid();

  ModelKind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  int b3() const { return static_cast<int>(poly_.size()); }
  // Complex-structure moduli count n (the rigid model has none; its
  // coordinate is tau).
  int complex_structure_dim() const { return kind_ == ModelKind::CubicPrepotential ? 1 : 0; }
  int eta(int a, int b) const { return eta_[a * b3() + b]; }
  const std::vector<int>& eta_matrix() const { return eta_; }
  std::string name() const;

  bool admissible(ModuliPoint p) const;
  void require_admissible(ModuliPoint p) const;
  void require_region(const Region& r) const;

  // d^order Pi / dz^order at the point (order 0..3). Constant for the
  // rigid model.
  std::vector<cplx> periods(cplx u, int order = 0) const;

  // Period polynomials: Pi_a(u) = sum_k coeff(a, k) u^k.
  const std::vector<std::array<cplx, 4>>& period_polynomials() const { return poly_; }

 private:
  PeriodModel(ModelKind kind, double kappa, std::vector<std::array<cplx, 4>> poly,
              std::vector<int> eta);

  ModelKind kind_;
  double kappa_;
  std::vector<std::array<cplx, 4>> poly_;
  std::vector<int> eta_;
};

std::vector<cplx> period_vector(const PeriodModel& m, ModuliPoint p);

// i Pi^dagger eta Pi for an arbitrary period vector.
double period_norm(const std::vector<int>& eta, const std::vector<cplx>& pi);

// Full Kahler potential K (rigid model includes -log Im tau).
double kahler_potential(const PeriodModel& m, ModuliPoint p);
// e^{-K} from the periods alone.
double period_exp_minus_k(const PeriodModel& m, ModuliPoint p);

// K and its derivatives at a point; g = d dbar K.
struct KahlerJet {
  double K;
  cplx Ku;   // dK/du
  cplx Kuu;  // d^2K/du^2
  double g;  // metric g_{u ubar}
  cplx dg;   // dg/du
};
// Closed forms in y = Im u.
KahlerJet kahler_jet(const PeriodModel& m, ModuliPoint p);
// Same quantities from i Pi^dagger eta Pi and its derivatives; loses digits
// to cancellation at large |u| or small y, kept as an independent check.
KahlerJet kahler_jet_from_periods(const PeriodModel& m, ModuliPoint p);

double metric(const PeriodModel& m, ModuliPoint p);
// Closed forms: 3/(4 y^2) for the cubic model, 1/(4 y^2) for the rigid one.
double metric_closed_form(const PeriodModel& m, ModuliPoint p);

struct MetricSample {
  ModuliPoint point;
  double g;
};
struct MetricVolume {
  std::vector<MetricSample> samples;  // 3x3 cell centres of the region
  double volume;                      // int_R det g dx dy
};
MetricVolume metric_and_volume(const PeriodModel& m, const Region& region);

// Central charge / superpotential as a polynomial in the modulus:
// s(u) = sum_k c_k u^k. A charge gives gamma^T eta Pi(z); a flux gives
// W = (f + sign * tau h)^T eta Pi on the rigid model.
struct SectionPolynomial {
  std::array<cplx, 4> c{};
  cplx value(cplx u) const { return ((c[3] * u + c[2]) * u + c[1]) * u + c[0]; }
  cplx d1(cplx u) const { return (3.0 * c[3] * u + 2.0 * c[2]) * u + c[1]; }
  cplx d2(cplx u) const { return 6.0 * c[3] * u + 2.0 * c[2]; }
};
SectionPolynomial section_polynomial(const PeriodModel& m, const Source& src,
                                     int flux_sign = +1);

cplx central_charge(const PeriodModel& m, const ChargeVector& q, ModuliPoint p);
cplx superpotential(const PeriodModel& m, const FluxVector& q, ModuliPoint p);

// |gamma^T eta Pi|^2 / (i Pi^dagger eta Pi); the -log Im tau term is not
// part of this normalisation.
double normalized_Z2(const PeriodModel& m, const ChargeVector& q, ModuliPoint p);
double normalized_Z2(const std::vector<int>& eta, const std::vector<long long>& gamma,
                     const std::vector<cplx>& pi);

// Everything local about a section at a point.
struct SectionJet {
  cplx s;    // section value
  cplx ds;   // ds/du
  cplx D;    // D s = ds + K_u s
  cplx dD;   // d(D s)/du
  cplx DD;   // D D s = dD + (K_u - Gamma) D s
  KahlerJet k;

  // e^{K/2}|D s| / sqrt(g): norm of the normalised covariant gradient
  double gradient_norm() const;
  // e^{K}|s|^2
  double normalized_value() const;
  // sign of det of the real Jacobian of u -> (Re D s, Im D s)
  int morse_sign() const;
};
SectionJet section_jet(const PeriodModel& m, const SectionPolynomial& s, ModuliPoint p);

cplx covariant_derivative(const PeriodModel& m, const Source& src, ModuliPoint p);

// Complex Hessian in the coordinate frame,
//   [[ d D̄ s̄ , D D s ], [ conj(D D s) , d̄ D s ]] with d D̄ s̄ = g s̄,
// plus its frame- and scale-invariant determinant e^{K} det H / g^2,
// which equals e^K |s|^2 at attractor points.
struct HessianMatrix {
  std::array<std::array<cplx, 2>, 2> h;
  cplx det;
  double normalized_det;
};
HessianMatrix hessian_matrix(const PeriodModel& m, const Source& src, ModuliPoint p,
                             int flux_sign = +1);

struct CurvatureQuantities {
  cplx yukawa;              // Pi^T eta d^3 Pi
  double curvature;         // R_{u ubar} = -d dbar log g
  double curvature_density; // det(R + omega) per unit coordinate area
};
CurvatureQuantities curvature_quantities(const PeriodModel& m, ModuliPoint p);

// -(1/4) Laplacian of log g by central differences, for cross-checks.
double curvature_finite_difference(const PeriodModel& m, ModuliPoint p, double h = 1e-4);

// int_R det(R + omega) dx dy
double integrated_curvature_density(const PeriodModel& m, const Region& region);

}  // namespace randcrit
