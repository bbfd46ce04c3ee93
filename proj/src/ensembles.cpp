#include "randcrit/ensembles.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

#include "randcrit/rng.hpp"

namespace randcrit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDegree: return "invalid_degree";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::NonFiniteInput: return "non_finite_input";
    case ErrorCode::DegenerateConditioning: return "degenerate_conditioning";
    case ErrorCode::NumericalInconsistency: return "numerical_inconsistency";
    case ErrorCode::QuadratureFailure: return "quadrature_failure";
    case ErrorCode::ZeroPolynomial: return "zero_polynomial";
    case ErrorCode::DomainError: return "domain_error";
    case ErrorCode::ContractViolation: return "contract_violation";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::TooFewRecords: return "too_few_records";
    case ErrorCode::InvalidConfig: return "invalid_config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

const char* ensemble_name(EnsembleKind kind) {
  return kind == EnsembleKind::Kac ? "kac" : "kostlan";
}

EnsembleKind parse_ensemble(const std::string& name) {
  if (name == "kac") return EnsembleKind::Kac;
  if (name == "kostlan") return EnsembleKind::Kostlan;
  throw Error(ErrorCode::InvalidConfig, "unknown ensemble '" + name + "'");
}

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Exact binomial row while it fits in 64 bits; nullopt-style empty vector
// once any entry would overflow.
std::vector<double> exact_binomial_row(int n) {
  std::vector<double> row(n + 1);
  unsigned __int128 c = 1;
  for (int k = 0; k <= n; ++k) {
    if (c > std::numeric_limits<std::uint64_t>::max()) return {};
    row[k] = static_cast<double>(static_cast<std::uint64_t>(c));
    c = c * static_cast<unsigned>(n - k) / static_cast<unsigned>(k + 1);
  }
  return row;
}

}  // namespace

int kostlan_max_degree() {
  static const int cap = [] {
    const double limit = std::log(DBL_MAX);
    int n = 1;
    while (log_binomial(n + 1, (n + 1) / 2) < limit) ++n;
    return n;
  }();
  return cap;
}

EnsembleSpec build_ensemble(EnsembleKind kind, int degree) {
  if (degree < 1) {
    throw Error(ErrorCode::InvalidDegree,
                "degree must be >= 1, got " + std::to_string(degree));
  }
  EnsembleSpec e{kind, degree, {}};
  if (kind == EnsembleKind::Kac) {
    e.variances.assign(degree + 1, 1.0);
    return e;
  }
  if (degree > kostlan_max_degree()) {
    throw Error(ErrorCode::Overflow,
                "Kostlan binomials overflow double beyond degree " +
                    std::to_string(kostlan_max_degree()));
  }
  e.variances = exact_binomial_row(degree);
  if (e.variances.empty()) {
    e.variances.resize(degree + 1);
    for (int k = 0; k <= degree; ++k) {
      e.variances[k] = std::exp(log_binomial(degree, k));
    }
    // lgamma rounding can break the exact symmetry of the row
    for (int k = 0; k < degree - k; ++k) e.variances[degree - k] = e.variances[k];
  }
  return e;
}

namespace {

void require_finite(cplx a, cplx b) {
  if (!is_finite(a) || !is_finite(b)) {
    throw Error(ErrorCode::NonFiniteInput, "kernel arguments must be finite");
  }
}

// g(w) = sum v_i w^i and its first two derivatives, by Horner.
void direct_jet(const std::vector<double>& v, cplx w, cplx& g, cplx& g1,
                cplx& g2) {
  g = g1 = g2 = 0.0;
  for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
    g2 = g2 * w + 2.0 * g1;
    g1 = g1 * w + g;
    g = g * w + v[i];
  }
}

constexpr double kKacSeriesSwitch = 1e-8;

}  // namespace

cplx kernel_direct_sum(const EnsembleSpec& e, cplx z1, cplx z2bar) {
  const cplx w = z1 * z2bar;
  cplx sum = 0.0, pw = 1.0;
  for (double v : e.variances) {
    sum += v * pw;
    pw *= w;
  }
  return sum;
}

KernelEval kernel(const EnsembleSpec& e, cplx z1, cplx z2bar) {
  require_finite(z1, z2bar);
  const cplx w = z1 * z2bar;
  const int n = e.degree;
  cplx g, g1, g2;
  switch (e.kind) {
    case EnsembleKind::Kostlan: {
      const cplx u = 1.0 + w;
      const cplx un2 = n >= 2 ? ipow(u, n - 2) : cplx(0.0);
      g = ipow(u, n);
      g1 = static_cast<double>(n) * ipow(u, n - 1);
      g2 = static_cast<double>(n) * (n - 1) * un2;
      break;
    }
    case EnsembleKind::Kac: {
      cplx dummy;
      direct_jet(e.variances, w, dummy, g1, g2);
      if (std::abs(1.0 - w) < kKacSeriesSwitch) {
        g = dummy;
      } else {
        g = (1.0 - ipow(w, n + 1)) / (1.0 - w);
      }
      break;
    }
  }
  return {g, g1 * z2bar, g1 * z1, g1 + w * g2};
}

cplx conditioned_kernel(const EnsembleSpec& e, cplx z, cplx z1, cplx z2bar) {
  const cplx zbar = std::conj(z);
  const cplx gzz = kernel(e, z, zbar).value;
  if (gzz == 0.0 || !is_finite(gzz)) {
    throw Error(ErrorCode::DegenerateConditioning,
                "G(z, conj z) vanishes; cannot condition on f(z) = 0");
  }
  return kernel(e, z1, z2bar).value -
         kernel(e, z1, zbar).value * kernel(e, z, z2bar).value / gzz;
}

SampledSection sample_section(const EnsembleSpec& e, std::uint64_t seed,
                              std::uint64_t index) {
  CounterRng rng(seed, Stream::ComplexSection, index);
  SampledSection s;
  s.coefficients.resize(e.variances.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < e.variances.size(); ++i) {
    const double g1 = rng.normal();
    const double g2 = rng.normal();
    s.coefficients[i] = std::sqrt(e.variances[i]) * inv_sqrt2 * cplx(g1, g2);
  }
  return s;
}

cplx evaluate_section(std::span<const cplx> c, cplx z) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace randcrit
