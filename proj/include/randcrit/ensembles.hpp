#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "randcrit/common.hpp"

namespace randcrit {

enum class EnsembleKind { Kac, Kostlan };

const char* ensemble_name(EnsembleKind kind);
EnsembleKind parse_ensemble(const std::string& name);

// Gaussian ensemble of degree-N polynomials f(z) = sum c_i z^i with
// independent coefficients, E[c_i conj(c_j)] = delta_ij * variances[i].
struct EnsembleSpec {
  EnsembleKind kind;
  int degree;
  std::vector<double> variances;  // sigma_i^2, length degree + 1
};

// Largest degree whose Kostlan binomial row is representable as double.
int kostlan_max_degree();

EnsembleSpec build_ensemble(EnsembleKind kind, int degree);

// Two-point function G(z1, conj z2) and its mixed derivatives. All four
// depend on z1 and z2bar only through w = z1 * z2bar.
struct KernelEval {
  cplx value;
  cplx d1;        // d/dz1
  cplx d2bar;     // d/dz2bar
  cplx d1d2bar;   // d^2/dz1 dz2bar
};

KernelEval kernel(const EnsembleSpec& e, cplx z1, cplx z2bar);

// Direct term-by-term sum of G; the closed forms in kernel() are checked
// against this.
cplx kernel_direct_sum(const EnsembleSpec& e, cplx z1, cplx z2bar);

// Two-point function of f conditioned on f(z) = 0.
cplx conditioned_kernel(const EnsembleSpec& e, cplx z, cplx z1, cplx z2bar);

struct SampledSection {
  std::vector<cplx> coefficients;  // c_0 .. c_N
};

// c_i = sigma_i (g1 + i g2) / sqrt(2), g1, g2 standard normal; a pure
// function of (seed, index).
SampledSection sample_section(const EnsembleSpec& e, std::uint64_t seed,
                              std::uint64_t index);

// Horner evaluation of sum c_i z^i.
cplx evaluate_section(std::span<const cplx> coefficients, cplx z);
inline cplx evaluate_section(const SampledSection& s, cplx z) {
  return evaluate_section(s.coefficients, z);
}

}  // namespace randcrit
