#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "randcrit/ensembles.hpp"

using namespace randcrit;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

// Explicit covariance projection: condition c ~ CN(0, diag(var)) on a.c = 0
// with a_i = z^i, then read off E[f(z1) conj f(z2)].
cplx projection_oracle(const std::vector<double>& var, cplx z, cplx z1, cplx z2bar) {
  const int n = static_cast<int>(var.size());
  std::vector<cplx> a(n), b1(n), b2c(n);
  for (int i = 0; i < n; ++i) {
    a[i] = std::pow(z, i);
    b1[i] = std::pow(z1, i);
    b2c[i] = std::pow(z2bar, i);
  }
  // Sigma' = Sigma - Sigma conj(a) a^T Sigma / (a^T Sigma conj(a))
  cplx denom = 0;
  for (int i = 0; i < n; ++i) denom += a[i] * var[i] * std::conj(a[i]);
  std::vector<std::vector<cplx>> S(n, std::vector<cplx>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      S[i][j] = (i == j ? var[i] : 0.0) - var[i] * std::conj(a[i]) * a[j] * var[j] / denom;
  cplx out = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out += b1[i] * S[i][j] * b2c[j];
  return out;
}

}  // namespace

TEST_CASE("variance rows") {
  CHECK(build_ensemble(EnsembleKind::Kac, 3).variances == std::vector<double>{1, 1, 1, 1});
  CHECK(build_ensemble(EnsembleKind::Kostlan, 4).variances == std::vector<double>{1, 4, 6, 4, 1});
  CHECK(build_ensemble(EnsembleKind::Kostlan, 20).variances[10] == 184756.0);

  // exact integer oracle for a row that still fits in 64 bits
  const auto row = build_ensemble(EnsembleKind::Kostlan, 60).variances;
  unsigned long long c = 1;
  for (int k = 0; k <= 60; ++k) {
    CHECK(row[k] == static_cast<double>(c));
    c = c * (60 - k) / (k + 1);
  }
}

TEST_CASE("degree errors and the Kostlan cap") {
  CHECK(code_of([] { build_ensemble(EnsembleKind::Kac, 0); }) == ErrorCode::InvalidDegree);
  CHECK(code_of([] { build_ensemble(EnsembleKind::Kostlan, -3); }) == ErrorCode::InvalidDegree);
  const int cap = kostlan_max_degree();
  CHECK(cap >= 1000);
  const auto big = build_ensemble(EnsembleKind::Kostlan, cap);
  for (double v : big.variances) CHECK(std::isfinite(v));
  CHECK(code_of([cap] { build_ensemble(EnsembleKind::Kostlan, cap + 1); }) == ErrorCode::Overflow);
  // log-space row stays symmetric and close to the recurrence
  const auto r = build_ensemble(EnsembleKind::Kostlan, 200).variances;
  for (int k = 0; k <= 200; ++k) CHECK(r[k] == r[200 - k]);
  CHECK(r[1] == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(code_of([] { parse_ensemble("gue"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("kernel examples") {
  const auto kac = build_ensemble(EnsembleKind::Kac, 7);
  CHECK(kernel(kac, 0.0, 0.0).value == cplx(1.0));
  const auto k5 = build_ensemble(EnsembleKind::Kostlan, 5);
  const cplx z = std::polar(1.0, 0.7);
  CHECK(std::abs(kernel(k5, z, std::conj(z)).value - 32.0) < 1e-12);

  const auto k6 = build_ensemble(EnsembleKind::Kac, 6);
  const cplx z1(0.3, 0.1), z2b(0.2, -0.4);
  const cplx g = kernel(k6, z1, z2b).value;
  const cplx w = z1 * z2b;
  cplx direct = 0;
  for (int i = 0; i <= 6; ++i) direct += std::pow(w, i);
  CHECK(std::abs(g - direct) <= 1e-14 * std::abs(direct));
  CHECK_THROWS_AS(kernel(k6, cplx(NAN, 0), 0.0), Error);
}

TEST_CASE("closed forms agree with direct sums and are hermitian") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  for (auto kind : {EnsembleKind::Kac, EnsembleKind::Kostlan}) {
    for (int n : {1, 2, 5, 17, 50}) {
      const auto e = build_ensemble(kind, n);
      for (int t = 0; t < 200; ++t) {
        const cplx z1(u(gen), u(gen)), z2(u(gen), u(gen));
        const cplx g = kernel(e, z1, std::conj(z2)).value;
        const cplx d = kernel_direct_sum(e, z1, std::conj(z2));
        // the direct sum cancels near w = -1 (Kostlan) and both forms lose
        // digits there; compare against the sum of |terms|, and demand plain
        // relative agreement where the cancellation is mild
        double scale = 0, pw = 1;
        for (double v : e.variances) scale += v * pw, pw *= std::abs(z1 * std::conj(z2));
        CHECK(std::abs(g - d) <= 1e-12 * scale);
        if (scale <= 10 * std::abs(d)) CHECK(std::abs(g - d) <= 1e-12 * std::abs(d));
        const cplx g21 = kernel(e, z2, std::conj(z1)).value;
        CHECK(std::abs(g - std::conj(g21)) <= 1e-12 * (1 + std::abs(g)));
      }
    }
  }
}

TEST_CASE("kernel derivatives against finite differences") {
  const auto e = build_ensemble(EnsembleKind::Kac, 9);
  const cplx z1(0.4, 0.2), z2b(0.3, -0.5);
  const auto k = kernel(e, z1, z2b);
  const double h = 1e-5;
  const cplx d1 = (kernel(e, z1 + h, z2b).value - kernel(e, z1 - h, z2b).value) / (2 * h);
  const cplx d2 = (kernel(e, z1, z2b + h).value - kernel(e, z1, z2b - h).value) / (2 * h);
  const cplx d12 = (kernel(e, z1 + h, z2b + h).value - kernel(e, z1 + h, z2b - h).value -
                    kernel(e, z1 - h, z2b + h).value + kernel(e, z1 - h, z2b - h).value) /
                   (4 * h * h);
  CHECK(std::abs(k.d1 - d1) < 1e-8);
  CHECK(std::abs(k.d2bar - d2) < 1e-8);
  CHECK(std::abs(k.d1d2bar - d12) < 1e-5);
}

TEST_CASE("Kac kernel near w = 1 uses the partial sum") {
  const auto e = build_ensemble(EnsembleKind::Kac, 30);
  const cplx z1(1.0 + 1e-10, 0.0);
  CHECK(std::abs(kernel(e, z1, 1.0).value - kernel_direct_sum(e, z1, 1.0)) < 1e-10);
  CHECK(std::abs(kernel(e, 1.0, 1.0).value - 31.0) < 1e-12);
}

TEST_CASE("conditioned kernel") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (auto kind : {EnsembleKind::Kac, EnsembleKind::Kostlan}) {
    const auto e = build_ensemble(kind, 8);
    for (int t = 0; t < 100; ++t) {
      const cplx z(u(gen), u(gen)), w(u(gen), u(gen));
      CHECK(std::abs(conditioned_kernel(e, z, z, std::conj(w))) <=
            1e-12 * (1 + std::abs(kernel(e, z, std::conj(w)).value)));
      CHECK(std::abs(conditioned_kernel(e, z, w, std::conj(z))) <=
            1e-12 * (1 + std::abs(kernel(e, w, std::conj(z)).value)));
    }
  }
  const auto kac5 = build_ensemble(EnsembleKind::Kac, 5);
  const cplx got = conditioned_kernel(kac5, 0.5, 0.1, 0.2);
  const cplx want = projection_oracle(kac5.variances, 0.5, 0.1, 0.2);
  CHECK(std::abs(got - want) < 1e-14);
  const auto kos = build_ensemble(EnsembleKind::Kostlan, 6);
  const cplx z(0.3, -0.7), z1(-0.2, 0.4), z2b(0.9, 0.1);
  CHECK(std::abs(conditioned_kernel(kos, z, z1, z2b) - projection_oracle(kos.variances, z, z1, z2b)) <
        1e-12);
}

TEST_CASE("sampling determinism and moments") {
  const auto kac = build_ensemble(EnsembleKind::Kac, 4);
  CHECK(sample_section(kac, 5, 17).coefficients == sample_section(kac, 5, 17).coefficients);
  CHECK(sample_section(kac, 5, 17).coefficients != sample_section(kac, 5, 18).coefficients);

  const int n = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double a = std::norm(sample_section(kac, 1, i).coefficients[0]);
    s += a;
    s2 += a * a;
  }
  const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0) < 3 * se);

  const auto k2 = build_ensemble(EnsembleKind::Kostlan, 2);
  double v0 = 0, v1 = 0;
  const int m = 50000;
  for (int i = 0; i < m; ++i) {
    const auto c = sample_section(k2, 2, i).coefficients;
    v0 += std::norm(c[0]);
    v1 += std::norm(c[1]);
  }
  // each |c|^2 is exponential, relative stderr 1/sqrt(m); ratio within ~5 of those
  CHECK(std::abs(v1 / v0 - 2.0) < 2.0 * 5 * std::sqrt(2.0 / m));
}

TEST_CASE("evaluate_section") {
  std::vector<cplx> one{1, 0, 0, 0};
  CHECK(evaluate_section(one, cplx(2.5, -1)) == cplx(1.0));
  std::vector<cplx> lin{0, 1};
  CHECK(evaluate_section(lin, cplx(3, 1)) == cplx(3, 1));
  const auto e = build_ensemble(EnsembleKind::Kostlan, 12);
  const auto s = sample_section(e, 9, 3);
  const cplx z(0.7, -0.4);
  cplx naive = 0;
  for (std::size_t i = 0; i < s.coefficients.size(); ++i)
    naive += s.coefficients[i] * std::pow(z, static_cast<int>(i));
  CHECK(std::abs(evaluate_section(s, z) - naive) <= 1e-13 * std::abs(naive));
}

TEST_CASE("empirical covariance matches the kernel") {
  const auto e = build_ensemble(EnsembleKind::Kac, 6);
  const cplx z1(0.5, 0.3), z2(-0.2, 0.6);
  const int n = 20000;
  cplx s = 0;
  double sr2 = 0, si2 = 0;
  for (int i = 0; i < n; ++i) {
    const auto sec = sample_section(e, 4, i);
    const cplx p = evaluate_section(sec, z1) * std::conj(evaluate_section(sec, z2));
    s += p;
    sr2 += p.real() * p.real();
    si2 += p.imag() * p.imag();
  }
  const cplx mean = s / double(n);
  const double ser = std::sqrt((sr2 / n - mean.real() * mean.real()) / n);
  const double sei = std::sqrt((si2 / n - mean.imag() * mean.imag()) / n);
  const cplx g = kernel(e, z1, std::conj(z2)).value;
  CHECK(std::abs(mean.real() - g.real()) < 5 * ser);
  CHECK(std::abs(mean.imag() - g.imag()) < 5 * sei);
}
