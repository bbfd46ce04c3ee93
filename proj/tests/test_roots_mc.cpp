#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "randcrit/montecarlo.hpp"
#include "randcrit/roots.hpp"

using namespace randcrit;

namespace {

std::vector<cplx> sorted(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

}  // namespace

TEST_CASE("root examples") {
  std::vector<cplx> c{-1, 0, 1};
  auto r = sorted(find_roots(c).roots);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] + 1.0) < 1e-14);
  CHECK(std::abs(r[1] - 1.0) < 1e-14);

  std::vector<cplx> lin{0, 1};
  auto r1 = find_roots(lin).roots;
  REQUIRE(r1.size() == 1);
  CHECK(std::abs(r1[0]) < 1e-15);

  std::vector<cplx> konst{3};
  CHECK(find_roots(konst).roots.empty());
  std::vector<cplx> zero{0, 0, 0};
  CHECK_THROWS_AS(find_roots(zero), Error);

  // trailing coefficients below 1e-14 max|c| are trimmed
  std::vector<cplx> trail{-2, 1, 1e-17};
  auto rt = find_roots(trail).roots;
  REQUIRE(rt.size() == 1);
  CHECK(std::abs(rt[0] - 2.0) < 1e-13);

  // known roots, including a cluster
  std::vector<cplx> roots{cplx(0.5, 0.1), cplx(-2, 1), cplx(0, -3), cplx(1.0, 0), cplx(1.001, 0)};
  std::vector<cplx> poly{1};
  for (cplx z0 : roots) {
    std::vector<cplx> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= z0 * poly[i];
    }
    poly = next;
  }
  auto got = sorted(find_roots(poly).roots);
  auto want = sorted(roots);
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
}

TEST_CASE("residual contract on random polynomials") {
  for (int n : {1, 5, 30, 100}) {
    for (auto kind : {EnsembleKind::Kac, EnsembleKind::Kostlan}) {
      const auto e = build_ensemble(kind, n);
      for (int i = 0; i < 250; ++i) {
        const auto s = sample_section(e, 77, i);
        const auto rs = find_roots(s.coefficients);
        double cmax = 0;
        for (cplx c : s.coefficients) cmax = std::max(cmax, std::abs(c));
        int top = n;
        while (std::abs(s.coefficients[top]) < 1e-14 * cmax) --top;
        CHECK(rs.roots.size() == static_cast<std::size_t>(top));
        CHECK(rs.max_residual() <= residual_bound(s.coefficients));
        CHECK(residual_bound(s.coefficients) <= 1e-8 * (1 + cmax));
      }
    }
  }
}

TEST_CASE("empirical density bookkeeping and determinism") {
  const auto e = build_ensemble(EnsembleKind::Kostlan, 6);
  const auto grid = square_grid(-2, 2, 8);
  // Kostlan N=100 regularly trims its leading coefficient; the lost roots
  // must still be tallied
  const auto big = empirical_zero_density(build_ensemble(EnsembleKind::Kostlan, 100), 20, grid, 4, 1);
  std::int64_t big_total = big.overflow;
  for (auto c : big.counts) big_total += c;
  CHECK(big_total == 20 * 100);
  const auto a = empirical_zero_density(e, 300, grid, 4, 1);
  const auto b = empirical_zero_density(e, 300, grid, 4, 3);
  CHECK(a.counts == b.counts);
  std::int64_t total = a.overflow;
  for (auto c : a.counts) total += c;
  CHECK(total == 300 * 6);
  CHECK(a.max_residual_ratio <= 1.0);
  const auto one1 = empirical_zero_density(e, 1, grid, 9, 1);
  const auto one2 = empirical_zero_density(e, 1, grid, 9, 1);
  CHECK(one1.counts == one2.counts);
  CHECK_THROWS_AS(empirical_zero_density(e, 0, grid, 1, 1), Error);
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    CHECK(a.density[i] == doctest::Approx(a.counts[i] / (300 * grid.cell_area())));
}

TEST_CASE("Kac N=100 concentrates on the circle") {
  const auto e = build_ensemble(EnsembleKind::Kac, 100);
  const int n = 1000;
  int in = 0;
  for (int i = 0; i < n; ++i) {
    for (cplx r : find_roots(sample_section(e, 21, i).coefficients).roots)
      if (std::abs(std::abs(r) - 1) < 0.1) ++in;
  }
  const double frac = in / (100.0 * n);
  const double want = region_mass(e, Annulus{0.9, 1.1}) / 100;
  CHECK(frac >= 0.5);
  CHECK(std::abs(frac / want - 1) < 0.02);
}

TEST_CASE("real zero counting") {
  const auto one = empirical_real_zero_count(1, 500, 3);
  CHECK(one.mean == 1.0);
  CHECK(one.stderr_ == 0.0);

  RealZeroOptions scaled;
  scaled.coefficient_scale = 1e3;
  for (int n : {7, 40}) {
    const auto a = empirical_real_zero_count(n, 400, 12);
    const auto b = empirical_real_zero_count(n, 400, 12, scaled);
    CHECK(a.mean == b.mean);
  }
  RealZeroOptions mt;
  mt.threads = 4;
  CHECK(empirical_real_zero_count(9, 300, 2).mean == empirical_real_zero_count(9, 300, 2, mt).mean);
  CHECK_THROWS_AS(empirical_real_zero_count(5, 1, 2), Error);
  CHECK(sample_real_polynomial(5, 3, 8) == sample_real_polynomial(5, 3, 8));

  const auto e10 = empirical_real_zero_count(10, 20000, 31);
  CHECK(std::abs(e10.mean - expected_real_zeros(10)) < 3 * e10.stderr_);

  // growth between N=50 and N=500 follows (2/pi) log ratio
  const auto a = empirical_real_zero_count(50, 3000, 41);
  const auto b = empirical_real_zero_count(500, 3000, 42);
  const double se = std::hypot(a.stderr_, b.stderr_);
  CHECK(std::abs((b.mean - a.mean) - 2 / kPi * std::log(10.0)) < 3 * se);
}

TEST_CASE("real root classification") {
  RootSet rs;
  rs.roots = {cplx(1, 0), cplx(2, 1e-9), cplx(2, -1e-9), cplx(0, 1)};
  CHECK(count_real_roots(rs, 1e-8) == 3);
  CHECK(count_real_roots(rs, 1e-12) == 1);
}
