#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "randcrit/kacrice.hpp"

using namespace randcrit;

namespace {

// direct evaluation in extended precision; fine away from t = 1
double kac_real_direct(int n, long double t) {
  const long double x = t * t;
  const long double a = 1.0L / ((1 - x) * (1 - x));
  const long double xn = std::pow(x, static_cast<long double>(n));
  const long double b = (n + 1.0L) * (n + 1.0L) * xn / ((1 - x * xn) * (1 - x * xn));
  return static_cast<double>(std::sqrt(a - b) / 3.141592653589793238462643L);
}

}  // namespace

TEST_CASE("complex density examples") {
  for (int n : {1, 5, 20}) {
    CHECK(complex_zero_density(build_ensemble(EnsembleKind::Kostlan, n), 0.0) ==
          doctest::Approx(n / kPi).epsilon(1e-14));
    CHECK(complex_zero_density(build_ensemble(EnsembleKind::Kac, n), 0.0) ==
          doctest::Approx(1 / kPi).epsilon(1e-14));
  }
  const auto kac10 = build_ensemble(EnsembleKind::Kac, 10);
  const auto fd = complex_zero_density_fd(kac10, 0.9);
  CHECK(std::abs(fd.value / complex_zero_density(kac10, 0.9) - 1) < 1e-5);
  CHECK_FALSE(fd.ill_conditioned);
  CHECK_THROWS_AS(complex_zero_density(kac10, cplx(INFINITY, 0)), Error);
}

TEST_CASE("Kac limit branch is continuous across the band edge") {
  for (int n : {3, 10, 100, 1000}) {
    const double band = kac_limit_band(n);
    for (double x : {1 - band, 1 + band}) {
      const double a = kac_profile(n, x), b = kac_profile_limit_form(n, x);
      CHECK(std::abs(a - b) <= 1e-7 * std::abs(b));
    }
    // at x = 1 the profile is N(N+2)/12
    CHECK(kac_profile(n, 1.0) == doctest::Approx(n * (n + 2.0) / 12.0).epsilon(1e-12));
  }
}

TEST_CASE("closed form against finite differences, N in {2,10,50}") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> r(0.0, 2.0), th(0.0, 2 * kPi);
  for (auto kind : {EnsembleKind::Kac, EnsembleKind::Kostlan}) {
    for (int n : {2, 10, 50}) {
      const auto e = build_ensemble(kind, n);
      for (int t = 0; t < 100; ++t) {
        const cplx z = std::polar(r(gen), th(gen));
        const auto fd = complex_zero_density_fd(e, z);
        const double cf = complex_zero_density(e, z);
        if (fd.ill_conditioned) continue;
        CHECK(std::abs(fd.value - cf) <= 1e-5 * cf);
      }
    }
  }
}

TEST_CASE("real density") {
  for (int n : {1, 4, 30}) CHECK(real_zero_density(n, 0.0) == doctest::Approx(1 / kPi).epsilon(1e-14));
  for (double t : {0.1, 0.5, 0.93, 1.7})
    CHECK(real_zero_density(7, t) == real_zero_density(7, -t));
  // limit branch at t = 0.99 against the two-sided direct evaluation
  const double mid = real_zero_density(25, 0.99);
  const double two = 0.5 * (kac_real_direct(25, 0.99L - 1e-6L) + kac_real_direct(25, 0.99L + 1e-6L));
  CHECK(std::abs(mid - two) <= 1e-4 * two);
  // reflection symmetry rho(1/t)/t^2 = rho(t) used by the quadrature
  for (double t : {0.2, 0.6, 0.95})
    CHECK(real_zero_density(12, 1 / t) / (t * t) == doctest::Approx(real_zero_density(12, t)).epsilon(1e-10));
}

TEST_CASE("expected real zeros") {
  CHECK(std::abs(expected_real_zeros(1) - 1.0) < 1e-6);
  // frozen from the quadrature (cross-checked against Monte Carlo in acceptance)
  CHECK(expected_real_zeros(10) == doctest::Approx(2.150272253).epsilon(1e-8));
  CHECK(expected_real_zeros(100) == doctest::Approx(3.563788996).epsilon(1e-8));
  const double e4 = expected_real_zeros(10000);
  CHECK(std::abs(e4 / (2 / kPi * std::log(10000.0)) - 1) < 0.15);
  CHECK_THROWS_AS(expected_real_zeros(0), Error);
}

TEST_CASE("region mass") {
  for (int n : {1, 8, 100}) {
    CHECK(std::abs(region_mass(build_ensemble(EnsembleKind::Kostlan, n), Annulus{}) - n) < 1e-4);
    CHECK(std::abs(region_mass(build_ensemble(EnsembleKind::Kac, n), Annulus{}) - n) < 1e-4);
  }
  const auto e = build_ensemble(EnsembleKind::Kostlan, 6);
  CHECK(region_mass(e, Rectangle{0, 0, 0, 1}) == 0.0);
  CHECK(region_mass(e, Annulus{0.5, 0.5}) == 0.0);
  // uniform on the sphere: the unit disc holds half the zeros
  CHECK(region_mass(e, Annulus{0, 1}) == doctest::Approx(3.0).epsilon(1e-6));
  // rectangle vs Fubini-Study closed form for the quarter disc is not
  // rectangular, so use symmetry: the four quadrants of a square are equal
  const double q = region_mass(e, Rectangle{0, 1, 0, 1});
  CHECK(region_mass(e, Rectangle{-1, 1, -1, 1}) == doctest::Approx(4 * q).epsilon(1e-5));
  CHECK_THROWS_AS(region_mass(e, Annulus{-1, 2}), Error);

  for (double eps : {0.05, 0.1}) {
    double prev = 0;
    for (int n : {25, 100, 400}) {
      const double f = region_mass(build_ensemble(EnsembleKind::Kac, n), Annulus{1 - eps, 1 + eps}) / n;
      CHECK(f > prev);
      prev = f;
    }
  }
  CHECK(region_mass(build_ensemble(EnsembleKind::Kac, 100), Annulus{0.9, 1.1}) / 100 > 0.5);
}

TEST_CASE("Kostlan density is Fubini-Study uniform") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> g;
  const auto e = build_ensemble(EnsembleKind::Kostlan, 13);
  const double c = 13 / kPi;
  for (int t = 0; t < 50; ++t) {
    cplx a(g(gen), g(gen)), b(g(gen), g(gen));
    const double s = std::sqrt(std::norm(a) + std::norm(b));
    a /= s;
    b /= s;
    const cplx z(g(gen), g(gen));
    const cplx w = (a * z + b) / (-std::conj(b) * z + std::conj(a));
    for (cplx p : {z, w}) {
      const double v = complex_zero_density(e, p) * std::pow(1 + std::norm(p), 2);
      CHECK(std::abs(v - c) <= 1e-10 * c);
    }
  }
}

TEST_CASE("density grid csv") {
  const auto e = build_ensemble(EnsembleKind::Kostlan, 2);
  const auto g = density_grid(e, square_grid(-1, 1, 2), 1);
  CHECK(g.density.size() == 4);
  std::ostringstream os;
  write_csv(os, g);
  const std::string s = os.str();
  CHECK(s.rfind("x,y,density\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
  CHECK(square_grid(-1, 1, 2).cell_of(cplx(0.5, -0.5)) == 1);
  CHECK(square_grid(-1, 1, 2).cell_of(cplx(1.5, 0)) == -1);
}
