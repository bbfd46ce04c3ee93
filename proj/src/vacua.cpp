#include "randcrit/vacua.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "randcrit/io.hpp"
#include "randcrit/parallel.hpp"
#include "randcrit/rng.hpp"

namespace randcrit {

namespace {

// Accepted iterates closer to the boundary than this, or farther out than
// kFarAway, count as having left the admissible window.
constexpr double kWindowFloor = 1e-3;
constexpr double kFarAway = 1e8;
constexpr double kEps = 2.220446049250313e-16;

bool in_window(const PeriodModel& m, cplx u) {
  return m.admissible({u}) && u.imag() > kWindowFloor && std::abs(u) < kFarAway;
}

long long linf(const std::vector<long long>& v) {
  long long r = 0;
  for (long long x : v) r = std::max(r, x < 0 ? -x : x);
  return r;
}

// Rounding noise in V = e^K |s|^2, from cancellation among the terms of s.
double value_noise(const SectionPolynomial& sp, cplx u, cplx s, double V) {
  const double r = std::abs(u);
  const double terms = std::abs(sp.c[0]) + r * (std::abs(sp.c[1]) + r * (std::abs(sp.c[2]) + r * std::abs(sp.c[3])));
  return 16.0 * kEps * V * (1.0 + terms / std::max(std::abs(s), 1e-300));
}

CriticalPointRecord make_record(const Source& src, cplx u, const SectionJet& j) {
  CriticalPointRecord r;
  r.source = src;
  r.location = {u};
  r.value = j.normalized_value();
  r.section = j.s;
  r.gradient_norm = j.gradient_norm();
  r.sign = j.morse_sign();
  return r;
}

}  // namespace

std::optional<CriticalPointRecord> attractor_flow(const PeriodModel& m,
                                                  const ChargeVector& gamma,
                                                  ModuliPoint start,
                                                  const FlowOptions& opts,
                                                  FlowTrace* trace) {
  m.require_admissible(start);
  if (linf(gamma.gamma) == 0)
    throw Error(ErrorCode::ContractViolation, "attractor flow needs a nonzero charge");
  const SectionPolynomial sp = section_polynomial(m, gamma);

  cplx u = start.u;
  SectionJet j = section_jet(m, sp, {u});
  double V = j.normalized_value();
  const double V0 = V;
  if (!(V > 0.0)) return std::nullopt;
  if (trace) {
    trace->objective.push_back(V);
    trace->points.push_back({u});
  }

  auto finish = [&](bool converged, int it) {
    CriticalPointRecord r = make_record(gamma, u, j);
    r.converged = converged;
    r.iterations = it;
    return r;
  };

  int stalled = 0;  // consecutive accepted steps improving neither V nor |D Z|
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double gn = j.gradient_norm();
    const double scale = 1.0 + std::sqrt(V);
    if (gn <= opts.tolerance * scale) return finish(true, it);
    const double rel = gn / std::sqrt(V);

    if (rel < 0.1) {
      const cplx a = j.dD;
      const cplx b = j.k.g * j.s;
      const double det = std::norm(a) - std::norm(b);
      if (std::abs(det) > 1e-14 * (std::norm(a) + std::norm(b))) {
        const cplx r = -j.D;
        const cplx step = (std::conj(a) * r - b * std::conj(r)) / det;
        const cplx un = u + step;
        if (in_window(m, un)) {
          SectionJet jn = section_jet(m, sp, {un});
          const double Vn = jn.normalized_value();
          // near the minimum V is flat to rounding; allow that much noise
          const double noise = value_noise(sp, u, j.s, V);
          if (Vn <= V + noise) {
            stalled = (Vn >= V - noise && jn.gradient_norm() > 0.5 * gn)
                          ? stalled + 1 : 0;
            u = un;
            j = jn;
            V = Vn;
            if (trace) {
              trace->objective.push_back(V);
              trace->points.push_back({u});
              ++trace->newton_steps;
            }
            if (stalled > 8) return finish(j.gradient_norm() <= 1e-9 * (1.0 + std::sqrt(V)), it + 1);
            continue;
          }
        }
      }
      // Newton can only fail here through rounding once the contract holds
      if (gn <= 1e-9 * scale) return finish(true, it);
    }

    // descent on log V: d/dubar log V = conj(D s / s)
    const cplx grad = std::conj(j.D / j.s);
    const cplx dir = -grad / j.k.g;
    const double slope = -2.0 * std::norm(grad) / j.k.g;  // d log V / d alpha
    const double logV = std::log(V);
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < 80; ++k, alpha *= 0.5) {
      const cplx un = u + alpha * dir;
      if (!m.admissible({un})) continue;
      SectionJet jn = section_jet(m, sp, {un});
      const double Vn = jn.normalized_value();
      if (!(Vn > 0.0)) return std::nullopt;  // landed on a zero of Z
      if (std::log(Vn) <= logV + 1e-4 * alpha * slope && Vn <= V) {
        stalled = (Vn >= V - value_noise(sp, u, j.s, V) && jn.gradient_norm() > 0.5 * gn)
                      ? stalled + 1 : 0;
        u = un;
        j = jn;
        V = Vn;
        accepted = true;
        break;
      }
    }
    if (!accepted) return finish(gn <= 1e-9 * scale, it);
    if (trace) {
      trace->objective.push_back(V);
      trace->points.push_back({u});
      ++trace->gradient_steps;
    }
    if (stalled > 8) return finish(j.gradient_norm() <= 1e-9 * (1.0 + std::sqrt(V)), it + 1);
    if (V <= 1e-20 * V0) return std::nullopt;
    if (!in_window(m, u)) return std::nullopt;
  }
  const bool ok = j.gradient_norm() <= opts.tolerance * (1.0 + std::sqrt(V));
  return finish(ok, opts.max_iterations);
}

std::vector<double> charge_component_bounds(const PeriodModel& m, const Region& region,
                                            double Zmax) {
  if (m.kind() != ModelKind::CubicPrepotential)
    throw Error(ErrorCode::Unsupported, "charge bounds implemented for the cubic model");
  m.require_region(region);
  // e^{-K} = (4 kappa / 3) y^3 is smallest on the bottom edge
  const double emk = period_exp_minus_k(m, {cplx(region.x0, region.y0)});
  const double ek_half = 1.0 / std::sqrt(emk);
  const double rmax = std::hypot(std::max(std::abs(region.x0), std::abs(region.x1)), region.y1);
  std::vector<double> out;
  for (const auto& c : m.period_polynomials()) {
    double bound = 0.0, r = 1.0;
    for (int k = 0; k < 4; ++k, r *= rmax) bound += std::abs(c[k]) * r;
    out.push_back(2.0 * Zmax * ek_half * bound);
  }
  return out;
}

double central_charge_discriminant(const PeriodModel& m, const ChargeVector& gamma) {
  if (m.kind() != ModelKind::CubicPrepotential)
    throw Error(ErrorCode::Unsupported, "discriminant defined for the cubic model");
  const auto c = section_polynomial(m, gamma).c;
  const double a0 = c[0].real(), a1 = c[1].real(), a2 = c[2].real(), a3 = c[3].real();
  return 18.0 * a3 * a2 * a1 * a0 - 4.0 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 -
         4.0 * a3 * a1 * a1 * a1 - 27.0 * a3 * a3 * a0 * a0;
}

double attractor_value_from_discriminant(const PeriodModel& m, const ChargeVector& gamma) {
  const double d = central_charge_discriminant(m, gamma);
  if (!(d > 0.0)) return 0.0;
  return 2.0 * std::sqrt(d) / (std::sqrt(3.0) * m.kappa());
}

AttractorEnumeration enumerate_attractor_points(const PeriodModel& m, const Region& region,
                                                double Zmax, int box,
                                                const AttractorOptions& opts) {
  if (m.kind() != ModelKind::CubicPrepotential)
    throw Error(ErrorCode::Unsupported, "attractor enumeration needs the cubic model");
  m.require_region(region);
  if (box < 1) throw Error(ErrorCode::InvalidConfig, "charge box must be >= 1");
  if (!(Zmax >= 0.0) || !std::isfinite(Zmax))
    throw Error(ErrorCode::InvalidConfig, "Zmax must be finite and >= 0");
  if (opts.start_grid < 1) throw Error(ErrorCode::InvalidConfig, "start grid must be >= 1");

  AttractorEnumeration out;
  CountReport& rep = out.report;
  rep.model = m.name();
  rep.region = region;
  rep.control = "Zmax";
  rep.control_value = Zmax;
  rep.box = box;
  rep.prediction = attractor_count_prediction(m, region, Zmax);
  if (region.empty() || Zmax == 0.0) return out;

  const int n = m.b3();
  const auto bounds = charge_component_bounds(m, region, Zmax);
  std::vector<long long> lim(n), width(n);
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) {
    lim[a] = std::min<long long>(box, static_cast<long long>(std::floor(bounds[a] * (1 + 1e-9))));
    width[a] = 2 * lim[a] + 1;
    total *= static_cast<std::size_t>(width[a]);
  }
  const double Z2 = Zmax * Zmax;

  std::vector<ModuliPoint> starts;
  for (int iy = 0; iy < opts.start_grid; ++iy)
    for (int ix = 0; ix < opts.start_grid; ++ix)
      starts.push_back({cplx(
          region.x0 + (ix + 0.5) * (region.x1 - region.x0) / opts.start_grid,
          region.y0 + (iy + 0.5) * (region.y1 - region.y0) / opts.start_grid)});

  struct Chunk {
    std::vector<CriticalPointRecord> counted, failed;
    long long scanned = 0, flowed = 0;
  };
  const std::size_t chunk = 512;
  std::vector<Chunk> parts(chunk_count(total, chunk));
  for_each_chunk(total, chunk, resolve_threads(opts.threads),
                 [&](std::size_t c, std::size_t begin, std::size_t end) {
    Chunk& part = parts[c];
    ChargeVector q{std::vector<long long>(n)};
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rem = idx;
      for (int a = n - 1; a >= 0; --a) {
        q.gamma[a] = static_cast<long long>(rem % width[a]) - lim[a];
        rem /= width[a];
      }
      if (linf(q.gamma) == 0) continue;
      ++part.scanned;
      if (opts.discriminant_prefilter) {
        const double d = central_charge_discriminant(m, q);
        if (!(d > 0.0)) continue;
        if (attractor_value_from_discriminant(m, q) > Z2 * (1 + 1e-9) + 1e-12) continue;
      }
      ++part.flowed;
      std::vector<CriticalPointRecord> found;
      for (const auto& s : starts) {
        auto rec = attractor_flow(m, q, s, opts.flow);
        if (!rec) continue;
        if (!rec->converged) {
          part.failed.push_back(*rec);
          continue;
        }
        // independent re-check of the gradient contract
        const SectionJet chk = section_jet(m, section_polynomial(m, q), rec->location);
        if (!(chk.gradient_norm() <= 1e-9 * (1.0 + std::sqrt(chk.normalized_value())))) {
          rec->converged = false;
          part.failed.push_back(*rec);
          continue;
        }
        bool dup = false;
        for (auto& f : found) {
          if (std::abs(f.location.u - rec->location.u) < opts.dedup_radius) {
            dup = true;
            const cplx a = rec->location.u, b = f.location.u;
            if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag())) f = *rec;
            break;
          }
        }
        if (!dup) found.push_back(*rec);
      }
      for (auto& r : found)
        if (region.contains(r.location.u) && r.value <= Z2) part.counted.push_back(r);
    }
  });

  for (auto& p : parts) {
    rep.sources_scanned += p.scanned;
    rep.sources_flowed += p.flowed;
    for (auto& r : p.counted) {
      const long long nrm = linf(std::get<ChargeVector>(r.source).gamma);
      ++rep.count;
      rep.signed_index += r.sign;
      if (nrm <= box - 1) ++rep.count_box_minus1;
      out.records.push_back(std::move(r));
    }
    rep.non_converged += static_cast<long long>(p.failed.size());
  }
  for (auto& p : parts)
    for (auto& r : p.failed) out.records.push_back(std::move(r));
  rep.ratio = rep.prediction > 0 ? rep.count / rep.prediction : 0.0;
  return out;
}

double attractor_count_prediction(const PeriodModel& m, const Region& region, double Zmax) {
  const int n = m.complex_structure_dim();
  const double vol = metric_and_volume(m, region).volume;
  if (vol == 0.0) return 0.0;
  return std::pow(2.0, n + 1) / ((n + 1) * std::pow(kPi, n)) * std::pow(Zmax, n + 1) * vol;
}

double attractor_continuum_count(const PeriodModel& m, const Region& region, double Zmax) {
  if (m.kind() != ModelKind::CubicPrepotential)
    throw Error(ErrorCode::Unsupported, "continuum attractor count is for the cubic model");
  return 2.0 * kPi * std::pow(Zmax, 4) * metric_and_volume(m, region).volume;
}

long long flux_length(const std::vector<long long>& f, const std::vector<long long>& h,
                      const std::vector<int>& eta) {
  const std::size_t n = f.size();
  if (h.size() != n || eta.size() != n * n)
    throw Error(ErrorCode::InvalidConfig, "flux_length: size mismatch");
  long long L = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) L += f[a] * eta[a * n + b] * h[b];
  return L;
}

std::optional<cplx> rigid_vacuum_location(const PeriodModel& m, const double* f,
                                          const double* h, int flux_sign) {
  if (m.kind() != ModelKind::RigidFlux)
    throw Error(ErrorCode::Unsupported, "closed-form vacua need the rigid model");
  const auto& poly = m.period_polynomials();
  cplx A = 0.0, B = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int e = m.eta(a, b);
      if (e == 0) continue;
      A += f[a] * static_cast<double>(e) * poly[b][0];
      B += h[a] * static_cast<double>(e) * poly[b][0];
    }
  B *= static_cast<double>(flux_sign);
  if (B == 0.0) return std::nullopt;
  const cplx tau = -std::conj(A) / std::conj(B);
  if (!(tau.imag() >= kDomainMargin)) return std::nullopt;
  return tau;
}

std::optional<VacuumSolution> rigid_vacuum_solve(const PeriodModel& m, const FluxVector& q,
                                                 int flux_sign) {
  if (q.f.size() != 2 || q.h.size() != 2)
    throw Error(ErrorCode::InvalidConfig, "rigid flux vectors have two components");
  const double f[2] = {static_cast<double>(q.f[0]), static_cast<double>(q.f[1])};
  const double h[2] = {static_cast<double>(q.h[0]), static_cast<double>(q.h[1])};
  const auto tau = rigid_vacuum_location(m, f, h, flux_sign);
  if (!tau) return std::nullopt;
  const SectionJet j = section_jet(m, section_polynomial(m, q, flux_sign), {*tau});
  std::vector<long long> hs = q.h;
  for (auto& x : hs) x *= flux_sign;
  return VacuumSolution{*tau, j.s, flux_length(q.f, hs, m.eta_matrix()),
                        j.normalized_value(), std::abs(j.D), j.morse_sign()};
}

bool in_fundamental_domain(const Region& r) {
  if (r.empty()) return true;
  if (r.x0 < -0.5 || r.x1 > 0.5) return false;
  const double xmin = (r.x0 <= 0.0 && r.x1 >= 0.0) ? 0.0 : std::min(std::abs(r.x0), std::abs(r.x1));
  return xmin * xmin + r.y0 * r.y0 >= 1.0;
}

FluxEnumeration enumerate_flux_vacua(const PeriodModel& m, const Region& region,
                                     long long Lmax, int box, const FluxOptions& opts) {
  if (m.kind() != ModelKind::RigidFlux)
    throw Error(ErrorCode::Unsupported, "flux enumeration needs the rigid model");
  m.require_region(region);
  if (Lmax < 1) throw Error(ErrorCode::InvalidConfig, "Lmax must be >= 1");
  if (box < 1) throw Error(ErrorCode::InvalidConfig, "flux box must be >= 1");
  if (opts.flux_sign != 1 && opts.flux_sign != -1)
    throw Error(ErrorCode::InvalidConfig, "flux sign must be +1 or -1");
  if (!in_fundamental_domain(region))
    throw Error(ErrorCode::DomainError, "region must lie in |Re tau| <= 1/2, |tau| >= 1");

  FluxEnumeration out;
  CountReport& rep = out.report;
  rep.model = m.name();
  rep.region = region;
  rep.control = "Lmax";
  rep.control_value = static_cast<double>(Lmax);
  rep.box = box;
  rep.count_box_plus2 = 0;
  rep.prediction = flux_index_prediction(m, region, Lmax);
  if (region.empty()) return out;

  const long long R = box + 2;
  const long long W = 2 * R + 1;
  const auto& eta = m.eta_matrix();

  struct Chunk {
    std::vector<CriticalPointRecord> recs;
    long long plus2 = 0, scanned = 0;
  };
  // one chunk per value of f_0
  std::vector<Chunk> parts(static_cast<std::size_t>(W));
  for_each_chunk(static_cast<std::size_t>(W), 1, resolve_threads(opts.threads),
                 [&](std::size_t c, std::size_t, std::size_t) {
    Chunk& part = parts[c];
    FluxVector q{{static_cast<long long>(c) - R, 0}, {0, 0}};
    for (long long f1 = -R; f1 <= R; ++f1)
      for (long long h0 = -R; h0 <= R; ++h0)
        for (long long h1 = -R; h1 <= R; ++h1) {
          q.f[1] = f1;
          q.h[0] = h0;
          q.h[1] = h1;
          ++part.scanned;
          const long long L = opts.flux_sign *
                              (q.f[0] * eta[1] * h1 + f1 * eta[2] * h0);
          if (L <= 0 || L > Lmax) continue;
          const double f[2] = {static_cast<double>(q.f[0]), static_cast<double>(f1)};
          const double h[2] = {static_cast<double>(h0), static_cast<double>(h1)};
          const auto tau = rigid_vacuum_location(m, f, h, opts.flux_sign);
          if (!tau || !region.contains(*tau)) continue;
          ++part.plus2;
          const long long nrm = std::max(linf(q.f), linf(q.h));
          if (nrm > box) continue;
          const SectionJet j = section_jet(m, section_polynomial(m, q, opts.flux_sign), {*tau});
          CriticalPointRecord r = make_record(q, *tau, j);
          r.L = L;
          r.converged = j.gradient_norm() <= 1e-9 * (1.0 + std::sqrt(r.value));
          part.recs.push_back(std::move(r));
        }
  });

  for (auto& p : parts) {
    rep.count_box_plus2 += p.plus2;
    rep.sources_scanned += p.scanned;
    for (auto& r : p.recs) {
      const auto& q = std::get<FluxVector>(r.source);
      if (!r.converged) {
        ++rep.non_converged;
      } else {
        ++rep.count;
        rep.signed_index += r.sign;
        if (std::max(linf(q.f), linf(q.h)) <= box - 1) ++rep.count_box_minus1;
        out.w2.push_back(r.value);
      }
      out.records.push_back(std::move(r));
    }
  }
  rep.sources_flowed = static_cast<long long>(out.records.size());
  // the prediction is an index, so compare it with the signed count
  rep.ratio = rep.prediction != 0 ? rep.signed_index / rep.prediction : 0.0;
  return out;
}

double flux_index_prediction(const PeriodModel& m, const Region& region, long long Lmax) {
  const int b3 = m.b3();
  const int n1 = m.complex_structure_dim() + 1;
  const double integral = integrated_curvature_density(m, region);
  if (integral == 0.0) return 0.0;
  double fact = 1.0;
  for (int k = 2; k <= b3; ++k) fact *= k;
  return std::pow(2.0 * kPi * static_cast<double>(Lmax), b3) / (std::pow(kPi, n1) * fact) *
         integral;
}

ContinuumEstimate continuum_flux_count(const PeriodModel& m, const Region& region,
                                       long long Lmax, long long n_samples,
                                       std::uint64_t seed, double box_radius, int threads) {
  if (m.kind() != ModelKind::RigidFlux)
    throw Error(ErrorCode::Unsupported, "continuum flux count needs the rigid model");
  m.require_region(region);
  if (Lmax < 1) throw Error(ErrorCode::InvalidConfig, "Lmax must be >= 1");
  if (n_samples < 1) throw Error(ErrorCode::InvalidConfig, "n_samples must be >= 1");
  if (!(box_radius > 0.0) || !std::isfinite(box_radius))
    throw Error(ErrorCode::InvalidConfig, "box radius must be positive");

  ContinuumEstimate out;
  out.n_samples = n_samples;
  out.box_radius = box_radius;
  if (region.empty()) return out;

  // |B|^2 = L / Im tau and |A| = |tau| |B|; both are Euclidean norms of h, f
  const double bmax = std::sqrt(static_cast<double>(Lmax) / region.y0);
  const double taumax = std::hypot(std::max(std::abs(region.x0), std::abs(region.x1)), region.y1);
  out.required_radius = std::max(1.0, taumax) * bmax;
  out.contained = box_radius >= out.required_radius;

  const auto& eta = m.eta_matrix();
  const std::size_t chunk = 4096;
  const std::size_t N = static_cast<std::size_t>(n_samples);
  std::vector<long long> hits(chunk_count(N, chunk), 0);
  for_each_chunk(N, chunk, resolve_threads(threads),
                 [&](std::size_t c, std::size_t begin, std::size_t end) {
    long long local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      CounterRng rng(seed, Stream::FluxContinuum, i);
      double f[2], h[2];
      f[0] = box_radius * (2.0 * rng.uniform() - 1.0);
      f[1] = box_radius * (2.0 * rng.uniform() - 1.0);
      h[0] = box_radius * (2.0 * rng.uniform() - 1.0);
      h[1] = box_radius * (2.0 * rng.uniform() - 1.0);
      const double L = f[0] * eta[1] * h[1] + f[1] * eta[2] * h[0];
      if (!(L > 0.0) || L > static_cast<double>(Lmax)) continue;
      const auto tau = rigid_vacuum_location(m, f, h);
      if (tau && region.contains(*tau)) ++local;
    }
    hits[c] = local;
  });
  for (long long h : hits) out.hits += h;
  const double vol = std::pow(2.0 * box_radius, 4);
  const double p = static_cast<double>(out.hits) / static_cast<double>(n_samples);
  out.estimate = vol * p;
  out.stderr_ = vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  return out;
}

double kolmogorov_pvalue(double d, std::size_t n) {
  if (n == 0) return 1.0;
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

W2Statistics w2_statistics(std::vector<double> values, int bins) {
  if (values.size() < 100) {
    std::ostringstream os;
    os << "w2_statistics needs >= 100 records, got " << values.size();
    throw Error(ErrorCode::TooFewRecords, os.str());
  }
  if (bins < 1) throw Error(ErrorCode::InvalidConfig, "need at least one bin");
  for (double v : values)
    if (!std::isfinite(v) || v < 0) throw Error(ErrorCode::NonFiniteInput, "bad |W|^2 value");
  std::sort(values.begin(), values.end());

  W2Statistics s;
  s.n_total = values.size();
  s.q = values[static_cast<std::size_t>(std::floor(0.25 * (values.size() - 1)))];
  s.n_lower = static_cast<std::size_t>(
      std::upper_bound(values.begin(), values.end(), s.q) - values.begin());
  s.counts.assign(bins, 0);
  for (int b = 0; b <= bins; ++b) s.edges.push_back(s.q * b / bins);
  for (std::size_t i = 0; i < s.n_lower; ++i) {
    int b = s.q > 0 ? static_cast<int>(values[i] / s.q * bins) : 0;
    ++s.counts[std::clamp(b, 0, bins - 1)];
  }
  double D = 0.0;
  if (s.q > 0) {
    const double n = static_cast<double>(s.n_lower);
    for (std::size_t i = 0; i < s.n_lower; ++i) {
      const double F = values[i] / s.q;
      D = std::max({D, (i + 1) / n - F, F - i / n});
    }
  } else {
    D = 1.0;
  }
  s.ks_distance = D;
  s.ks_pvalue = kolmogorov_pvalue(D, s.n_lower);
  s.uniform_at_1pct = s.ks_pvalue > 0.01;
  return s;
}

std::string to_json(const CountReport& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["region"] = {{"x0", r.region.x0}, {"x1", r.region.x1}, {"y0", r.region.y0},
                 {"y1", r.region.y1}};
  j["control"] = r.control;
  j["control_value"] = r.control_value;
  j["count"] = r.count;
  j["signed_index"] = r.signed_index;
  j["prediction"] = r.prediction;
  j["ratio"] = r.ratio;
  j["box"] = r.box;
  j["count_box_minus1"] = r.count_box_minus1;
  if (r.count_box_plus2 >= 0) j["count_box_plus2"] = r.count_box_plus2;
  j["saturated"] = r.saturated();
  j["non_converged"] = r.non_converged;
  j["sources_scanned"] = r.sources_scanned;
  j["sources_flowed"] = r.sources_flowed;
  return j.dump(2);
}

void write_records_csv(std::ostream& out, const PeriodModel& m,
                       const std::vector<CriticalPointRecord>& records) {
  const int n = m.b3();
  const bool flux = m.kind() == ModelKind::RigidFlux;
  for (int a = 0; a < n; ++a) out << (flux ? "f" : "g") << a << ',';
  if (flux)
    for (int a = 0; a < n; ++a) out << 'h' << a << ',';
  out << "x,y," << (flux ? "absW2" : "absZ2") << ",L,sign,converged\n";
  for (const auto& r : records) {
    if (const auto* q = std::get_if<ChargeVector>(&r.source)) {
      for (long long g : q->gamma) out << g << ',';
    } else {
      const auto& fl = std::get<FluxVector>(r.source);
      for (long long v : fl.f) out << v << ',';
      for (long long v : fl.h) out << v << ',';
    }
    out << format_number(r.location.u.real()) << ',' << format_number(r.location.u.imag())
        << ',' << format_number(r.value) << ',';
    if (std::holds_alternative<FluxVector>(r.source)) out << r.L;
    out << ',' << r.sign << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

}  // namespace randcrit
