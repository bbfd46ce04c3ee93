#include "randcrit/special_geometry.hpp"

#include <cmath>
#include <sstream>

#include "randcrit/quadrature.hpp"

namespace randcrit {

namespace {

constexpr cplx I(0.0, 1.0);

// i a^dagger eta b
cplx pairing(const std::vector<int>& eta, const std::vector<cplx>& a,
             const std::vector<cplx>& b) {
  const std::size_t n = a.size();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const int e = eta[i * n + j];
      if (e != 0) acc += std::conj(a[i]) * static_cast<double>(e) * b[j];
    }
  return I * acc;
}

// a^T eta b (no conjugation)
cplx wedge(const std::vector<int>& eta, const std::vector<cplx>& a,
           const std::vector<cplx>& b) {
  const std::size_t n = a.size();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const int e = eta[i * n + j];
      if (e != 0) acc += a[i] * static_cast<double>(e) * b[j];
    }
  return acc;
}

void check_vector_size(const std::vector<long long>& v, int b3, const char* what) {
  if (static_cast<int>(v.size()) != b3) {
    std::ostringstream os;
    os << what << " has " << v.size() << " components, model has b3 = " << b3;
    throw Error(ErrorCode::InvalidConfig, os.str());
  }
}

}  // namespace

PeriodModel::PeriodModel(ModelKind kind, double kappa,
                         std::vector<std::array<cplx, 4>> poly, std::vector<int> eta)
    : kind_(kind), kappa_(kappa), poly_(std::move(poly)), eta_(std::move(eta)) {}

PeriodModel PeriodModel::cubic(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw Error(ErrorCode::InvalidConfig, "cubic model needs kappa > 0");
  std::vector<std::array<cplx, 4>> poly(4);
  poly[0] = {1.0, 0.0, 0.0, 0.0};
  poly[1] = {0.0, 1.0, 0.0, 0.0};
  poly[2] = {0.0, 0.0, -kappa / 2.0, 0.0};
  poly[3] = {0.0, 0.0, 0.0, kappa / 6.0};
  std::vector<int> eta = {0, 0, 0, 1,
                          0, 0, 1, 0,
                          0, -1, 0, 0,
                          -1, 0, 0, 0};
  return PeriodModel(ModelKind::CubicPrepotential, kappa, std::move(poly), std::move(eta));
}

PeriodModel PeriodModel::rigid() {
  std::vector<std::array<cplx, 4>> poly(2);
  poly[0] = {1.0, 0.0, 0.0, 0.0};
  poly[1] = {-I, 0.0, 0.0, 0.0};
  std::vector<int> eta = {0, 1, -1, 0};
  return PeriodModel(ModelKind::RigidFlux, 0.0, std::move(poly), std::move(eta));
}

std::string PeriodModel::name() const {
  return kind_ == ModelKind::CubicPrepotential ? "cubic" : "rigid";
}

bool PeriodModel::admissible(ModuliPoint p) const {
  return is_finite(p.u) && p.u.imag() >= kDomainMargin;
}

void PeriodModel::require_admissible(ModuliPoint p) const {
  if (!is_finite(p.u)) throw Error(ErrorCode::NonFiniteInput, "non-finite moduli point");
  if (!admissible(p)) {
    std::ostringstream os;
    os << "moduli point (" << p.u.real() << ", " << p.u.imag()
       << ") outside admissible domain Im > " << kDomainMargin;
    throw Error(ErrorCode::DomainError, os.str());
  }
}

void PeriodModel::require_region(const Region& r) const {
  if (!std::isfinite(r.x0) || !std::isfinite(r.x1) || !std::isfinite(r.y0) ||
      !std::isfinite(r.y1))
    throw Error(ErrorCode::NonFiniteInput, "non-finite region bounds");
  if (r.empty()) return;
  if (r.y0 < kDomainMargin)
    throw Error(ErrorCode::DomainError, "region reaches below Im = 1e-6");
}

std::vector<cplx> PeriodModel::periods(cplx u, int order) const {
  if (order < 0 || order > 3)
    throw Error(ErrorCode::ContractViolation, "period derivative order must be 0..3");
  std::vector<cplx> out(poly_.size());
  for (std::size_t a = 0; a < poly_.size(); ++a) {
    const auto& c = poly_[a];
    // derivative of sum_k c_k u^k, Horner on the shifted coefficients
    cplx acc = 0.0;
    for (int k = 3; k >= order; --k) {
      double fall = 1.0;
      for (int j = 0; j < order; ++j) fall *= static_cast<double>(k - j);
      acc = acc * u + c[k] * fall;
    }
    out[a] = acc;
  }
  return out;
}

std::vector<cplx> period_vector(const PeriodModel& m, ModuliPoint p) {
  m.require_admissible(p);
  return m.periods(p.u, 0);
}

double period_norm(const std::vector<int>& eta, const std::vector<cplx>& pi) {
  return pairing(eta, pi, pi).real();
}

double period_exp_minus_k(const PeriodModel& m, ModuliPoint p) {
  m.require_admissible(p);
  const double e = period_norm(m.eta_matrix(), m.periods(p.u, 0));
  if (!(e > 0.0)) throw Error(ErrorCode::DomainError, "nonpositive e^{-K}");
  return e;
}

KahlerJet kahler_jet_from_periods(const PeriodModel& m, ModuliPoint p) {
  m.require_admissible(p);
  const auto& eta = m.eta_matrix();
  const auto P0 = m.periods(p.u, 0);
  const auto P1 = m.periods(p.u, 1);
  const auto P2 = m.periods(p.u, 2);
  const double E = pairing(eta, P0, P0).real();
  if (!(E > 0.0)) throw Error(ErrorCode::DomainError, "nonpositive e^{-K}");
  const cplx Eu = pairing(eta, P0, P1);
  const cplx Euu = pairing(eta, P0, P2);
  const double Euv = pairing(eta, P1, P1).real();
  const cplx Euuv = pairing(eta, P1, P2);
  const cplx Ev = std::conj(Eu);

  KahlerJet j;
  j.K = -std::log(E);
  j.Ku = -Eu / E;
  j.Kuu = -Euu / E + Eu * Eu / (E * E);
  j.g = -Euv / E + std::norm(Eu) / (E * E);
  j.dg = -Euuv / E + Euv * Eu / (E * E) + (Euu * Ev + Eu * Euv) / (E * E) -
         2.0 * std::norm(Eu) * Eu / (E * E * E);

  if (m.kind() == ModelKind::RigidFlux) {
    const double y = p.u.imag();
    j.K += -std::log(y);
    j.Ku += I / (2.0 * y);
    j.Kuu += -1.0 / (4.0 * y * y);
    j.g += 1.0 / (4.0 * y * y);
    j.dg += I / (4.0 * y * y * y);
  }
  if (!(j.g > 0.0)) throw Error(ErrorCode::DomainError, "metric not positive");
  return j;
}

KahlerJet kahler_jet(const PeriodModel& m, ModuliPoint p) {
  m.require_admissible(p);
  // Both models have K = -log(c y^w) with w = 3 (cubic) or 1 (rigid);
  // d y / du = -i/2.
  const double y = p.u.imag();
  const bool cubic = m.kind() == ModelKind::CubicPrepotential;
  const double w = cubic ? 3.0 : 1.0;
  const double c = cubic ? 4.0 * m.kappa() / 3.0 : 2.0;
  KahlerJet j;
  j.K = -std::log(c) - w * std::log(y);
  j.Ku = I * (w / (2.0 * y));
  j.Kuu = -w / (4.0 * y * y);
  j.g = w / (4.0 * y * y);
  j.dg = I * (w / (4.0 * y * y * y));
  return j;
}

double kahler_potential(const PeriodModel& m, ModuliPoint p) {
  double K = -std::log(period_exp_minus_k(m, p));
  if (m.kind() == ModelKind::RigidFlux) K -= std::log(p.u.imag());
  return K;
}

double metric(const PeriodModel& m, ModuliPoint p) { return kahler_jet(m, p).g; }

double metric_closed_form(const PeriodModel& m, ModuliPoint p) {
  m.require_admissible(p);
  const double y = p.u.imag();
  return (m.kind() == ModelKind::CubicPrepotential ? 3.0 : 1.0) / (4.0 * y * y);
}

MetricVolume metric_and_volume(const PeriodModel& m, const Region& region) {
  m.require_region(region);
  MetricVolume out;
  out.volume = 0.0;
  if (region.empty()) return out;
  for (int iy = 0; iy < 3; ++iy)
    for (int ix = 0; ix < 3; ++ix) {
      ModuliPoint p{cplx(region.x0 + (ix + 0.5) * (region.x1 - region.x0) / 3.0,
                         region.y0 + (iy + 0.5) * (region.y1 - region.y0) / 3.0)};
      out.samples.push_back({p, metric_closed_form(m, p)});
    }
  out.volume = integrate_rect(
                   [&](double x, double y) { return metric_closed_form(m, {cplx(x, y)}); },
                   region.x0, region.x1, region.y0, region.y1, 1e-6)
                   .value;
  return out;
}

SectionPolynomial section_polynomial(const PeriodModel& m, const Source& src, int flux_sign) {
  const int n = m.b3();
  const auto& poly = m.period_polynomials();
  // coefficient vector of v^T eta Pi(u)
  auto contract = [&](const std::vector<long long>& v) {
    std::array<cplx, 4> c{};
    for (int a = 0; a < n; ++a) {
      if (v[a] == 0) continue;
      for (int b = 0; b < n; ++b) {
        const int e = m.eta(a, b);
        if (e == 0) continue;
        for (int k = 0; k < 4; ++k)
          c[k] += static_cast<double>(v[a]) * static_cast<double>(e) * poly[b][k];
      }
    }
    return c;
  };

  SectionPolynomial s;
  if (const auto* q = std::get_if<ChargeVector>(&src)) {
    check_vector_size(q->gamma, n, "charge vector");
    s.c = contract(q->gamma);
    return s;
  }
  const auto& fl = std::get<FluxVector>(src);
  if (m.kind() != ModelKind::RigidFlux)
    throw Error(ErrorCode::Unsupported, "flux superpotential only on the rigid model");
  check_vector_size(fl.f, n, "flux f");
  check_vector_size(fl.h, n, "flux h");
  const auto A = contract(fl.f);
  const auto B = contract(fl.h);
  // periods are constant here, so W = A + sign * tau * B is linear in tau
  s.c = {A[0], static_cast<double>(flux_sign) * B[0], 0.0, 0.0};
  return s;
}

cplx central_charge(const PeriodModel& m, const ChargeVector& q, ModuliPoint p) {
  m.require_admissible(p);
  return section_polynomial(m, q).value(p.u);
}

cplx superpotential(const PeriodModel& m, const FluxVector& q, ModuliPoint p) {
  m.require_admissible(p);
  return section_polynomial(m, q).value(p.u);
}

double normalized_Z2(const std::vector<int>& eta, const std::vector<long long>& gamma,
                     const std::vector<cplx>& pi) {
  std::vector<cplx> g(gamma.begin(), gamma.end());
  const double E = period_norm(eta, pi);
  if (!(E > 0.0)) throw Error(ErrorCode::DomainError, "nonpositive e^{-K}");
  return std::norm(wedge(eta, g, pi)) / E;
}

double normalized_Z2(const PeriodModel& m, const ChargeVector& q, ModuliPoint p) {
  check_vector_size(q.gamma, m.b3(), "charge vector");
  return normalized_Z2(m.eta_matrix(), q.gamma, period_vector(m, p));
}

double SectionJet::gradient_norm() const {
  return std::exp(0.5 * k.K) * std::abs(D) / std::sqrt(k.g);
}

double SectionJet::normalized_value() const { return std::exp(k.K) * std::norm(s); }

int SectionJet::morse_sign() const {
  const double det = std::norm(dD) - k.g * k.g * std::norm(s);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

SectionJet section_jet(const PeriodModel& m, const SectionPolynomial& s, ModuliPoint p) {
  SectionJet j;
  j.k = kahler_jet(m, p);
  const cplx u = p.u;
  j.s = s.value(u);
  j.ds = s.d1(u);
  const cplx s2 = s.d2(u);
  j.D = j.ds + j.k.Ku * j.s;
  j.dD = s2 + j.k.Kuu * j.s + j.k.Ku * j.ds;
  const cplx gamma = j.k.dg / j.k.g;
  j.DD = j.dD + (j.k.Ku - gamma) * j.D;
  return j;
}

cplx covariant_derivative(const PeriodModel& m, const Source& src, ModuliPoint p) {
  return section_jet(m, section_polynomial(m, src), p).D;
}

HessianMatrix hessian_matrix(const PeriodModel& m, const Source& src, ModuliPoint p,
                             int flux_sign) {
  const SectionJet j = section_jet(m, section_polynomial(m, src, flux_sign), p);
  const double scale = 1.0 + std::sqrt(j.normalized_value());
  if (!(j.gradient_norm() <= 1e-6 * scale)) {
    std::ostringstream os;
    os << "hessian requested away from a critical point (|Ds| normalised = "
       << j.gradient_norm() << ")";
    throw Error(ErrorCode::ContractViolation, os.str());
  }
  HessianMatrix H;
  H.h[0][0] = j.k.g * std::conj(j.s);
  H.h[0][1] = j.DD;
  H.h[1][0] = std::conj(j.DD);
  H.h[1][1] = j.k.g * j.s;
  H.det = H.h[0][0] * H.h[1][1] - H.h[0][1] * H.h[1][0];
  H.normalized_det = std::exp(j.k.K) * H.det.real() / (j.k.g * j.k.g);
  return H;
}

CurvatureQuantities curvature_quantities(const PeriodModel& m, ModuliPoint p) {
  m.require_admissible(p);
  CurvatureQuantities c;
  c.yukawa = wedge(m.eta_matrix(), m.periods(p.u, 0), m.periods(p.u, 3));
  // both metrics are (const)/y^2, so d dbar log g = 1/(2 y^2)
  const double y = p.u.imag();
  c.curvature = -1.0 / (2.0 * y * y);
  c.curvature_density = c.curvature + metric_closed_form(m, p);
  return c;
}

double curvature_finite_difference(const PeriodModel& m, ModuliPoint p, double h) {
  auto lg = [&](double dx, double dy) {
    return std::log(kahler_jet(m, {p.u + cplx(dx, dy)}).g);
  };
  const double c = lg(0, 0);
  const double lap = (lg(h, 0) + lg(-h, 0) + lg(0, h) + lg(0, -h) - 4.0 * c) / (h * h);
  return -0.25 * lap;
}

double integrated_curvature_density(const PeriodModel& m, const Region& region) {
  m.require_region(region);
  if (region.empty()) return 0.0;
  return integrate_rect(
             [&](double x, double y) {
               return curvature_quantities(m, {cplx(x, y)}).curvature_density;
             },
             region.x0, region.x1, region.y0, region.y1, 1e-6)
      .value;
}

}  // namespace randcrit
