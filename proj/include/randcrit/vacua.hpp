#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "randcrit/special_geometry.hpp"

namespace randcrit {

struct CriticalPointRecord {
  Source source;
  ModuliPoint location;
  double value = 0.0;     // e^K |Z|^2 (attractors) or e^K |W|^2 (flux vacua)
  cplx section = 0.0;     // Z or W at the point
  long long L = 0;        // flux vacua only
  double gradient_norm = 0.0;
  int sign = 0;           // Morse sign of the real Jacobian of D s
  bool converged = false;
  int iterations = 0;
};

struct FlowOptions {
  int max_iterations = 10000;
  double tolerance = 1e-12;  // on gradient_norm / (1 + |Z|)
};

struct FlowTrace {
  std::vector<double> objective;  // e^K |Z|^2 after every accepted step
  std::vector<ModuliPoint> points;
  int gradient_steps = 0;
  int newton_steps = 0;
};

// Metric-preconditioned descent on log(e^K |Z|^2) with Armijo backtracking,
// switching to Newton on D_z Z = 0 once the relative gradient is small.
// Returns nullopt when |Z| -> 0 or the flow leaves the admissible window;
// iteration exhaustion comes back as a record with converged = false.
std::optional<CriticalPointRecord> attractor_flow(const PeriodModel& m,
                                                  const ChargeVector& gamma,
                                                  ModuliPoint start,
                                                  const FlowOptions& opts = {},
                                                  FlowTrace* trace = nullptr);

struct CountReport {
  std::string model;
  Region region;
  std::string control;       // "Zmax" or "Lmax"
  double control_value = 0;
  long long count = 0;
  long long signed_index = 0;
  double prediction = 0;
  double ratio = 0;          // count (attractors) or signed_index (flux) over prediction
  int box = 0;
  long long count_box_minus1 = 0;
  long long count_box_plus2 = -1;  // -1 when not computed
  long long non_converged = 0;
  long long sources_scanned = 0;
  long long sources_flowed = 0;

  bool saturated() const {
    return count == count_box_minus1 && (count_box_plus2 < 0 || count == count_box_plus2);
  }
};

std::string to_json(const CountReport& r);

struct AttractorOptions {
  int start_grid = 3;          // start_grid x start_grid flow starts per charge
  int threads = 1;
  // Skip charges whose cubic central charge has nonpositive discriminant or
  // whose attractor value 2 sqrt(disc) / (sqrt(3) kappa) exceeds Zmax^2.
  bool discriminant_prefilter = true;
  double dedup_radius = 1e-6;
  FlowOptions flow{};
};

struct AttractorEnumeration {
  CountReport report;
  std::vector<CriticalPointRecord> records;  // counted (converged) records first
};

// |gamma_a| <= 2 Zmax max_R e^{K/2} |Pi_a| holds at every attractor in R.
std::vector<double> charge_component_bounds(const PeriodModel& m, const Region& region,
                                            double Zmax);

// Binary-cubic discriminant of Z(z) and the attractor value it implies.
double central_charge_discriminant(const PeriodModel& m, const ChargeVector& gamma);
double attractor_value_from_discriminant(const PeriodModel& m, const ChargeVector& gamma);

AttractorEnumeration enumerate_attractor_points(const PeriodModel& m, const Region& region,
                                                double Zmax, int box,
                                                const AttractorOptions& opts = {});

// (2^{n+1} / ((n+1) pi^n)) Zmax^{n+1} vol(R)
double attractor_count_prediction(const PeriodModel& m, const Region& region, double Zmax);

// Continuum charge-volume count for the one-modulus cubic model,
// 2 pi Zmax^4 vol(R); the leading large-Zmax lattice count.
double attractor_continuum_count(const PeriodModel& m, const Region& region, double Zmax);

struct VacuumSolution {
  cplx tau;
  cplx W;
  long long L;
  double value;     // e^K |W|^2
  double residual;  // |D_tau W| at tau
  int sign;
};

// f^T eta h, exact.
long long flux_length(const std::vector<long long>& f, const std::vector<long long>& h,
                      const std::vector<int>& eta);

// D_tau W = B + K_tau (A + tau B) with K_tau = -1/(tau - taubar) vanishes iff
// B (tau - taubar) = A + tau B, i.e. taubar = -A/B.
std::optional<cplx> rigid_vacuum_location(const PeriodModel& m, const double* f,
                                          const double* h, int flux_sign = +1);
std::optional<VacuumSolution> rigid_vacuum_solve(const PeriodModel& m, const FluxVector& q,
                                                 int flux_sign = +1);

bool in_fundamental_domain(const Region& r);

struct FluxOptions {
  int threads = 1;
  int flux_sign = +1;  // W = (f + sign tau h)^T eta Pi
};

struct FluxEnumeration {
  CountReport report;
  std::vector<CriticalPointRecord> records;
  std::vector<double> w2;  // e^K |W|^2 of every counted vacuum
};

FluxEnumeration enumerate_flux_vacua(const PeriodModel& m, const Region& region,
                                     long long Lmax, int box, const FluxOptions& opts = {});

// ((2 pi Lmax)^{b3} / (pi^{n+1} b3!)) int_R det(R + omega)
double flux_index_prediction(const PeriodModel& m, const Region& region, long long Lmax);

struct ContinuumEstimate {
  double estimate = 0;
  double stderr_ = 0;
  long long hits = 0;
  long long n_samples = 0;
  double box_radius = 0;
  double required_radius = 0;  // smallest box containing the admissible set
  bool contained = true;
};

ContinuumEstimate continuum_flux_count(const PeriodModel& m, const Region& region,
                                       long long Lmax, long long n_samples,
                                       std::uint64_t seed, double box_radius,
                                       int threads = 1);

struct W2Statistics {
  std::size_t n_total = 0;
  std::size_t n_lower = 0;  // values <= q
  double q = 0;             // 25th percentile
  std::vector<double> edges;
  std::vector<long long> counts;
  double ks_distance = 0;
  double ks_pvalue = 0;
  bool uniform_at_1pct = false;
};

W2Statistics w2_statistics(std::vector<double> values, int bins = 20);

// Asymptotic Kolmogorov survival function with the Stephens correction.
double kolmogorov_pvalue(double d, std::size_t n);

void write_records_csv(std::ostream& out, const PeriodModel& m,
                       const std::vector<CriticalPointRecord>& records);

}  // namespace randcrit
