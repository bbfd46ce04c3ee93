#include "randcrit/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace randcrit {

double RootSet::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

double residual_bound(std::span<const cplx> c) {
  double cmax = 0.0;
  for (cplx v : c) cmax = std::max(cmax, std::abs(v));
  return 1e-8 * (1.0 + cmax);
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Newton correction p(z)/p'(z) together with the backward-error test. For
// |z| > 1 the reversed polynomial is evaluated at 1/z to avoid overflow.
struct NewtonTerm {
  cplx ratio;
  bool small_residual;
  double residual;  // |p(z)| / max(1,|z|)^N
};

NewtonTerm newton_term(std::span<const cplx> c, cplx z) {
  const int n = static_cast<int>(c.size()) - 1;
  cplx p = 0.0, dp = 0.0;
  double bound = 0.0;
  if (std::abs(z) <= 1.0) {
    const double az = std::abs(z);
    for (int k = n; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + c[k];
      bound = bound * az + std::abs(c[k]);
    }
    return {p / dp, std::abs(p) <= 4.0 * n * kEps * bound, std::abs(p)};
  }
  const cplx w = 1.0 / z;
  const double aw = std::abs(w);
  cplx q = 0.0, dq = 0.0;
  for (int k = 0; k <= n; ++k) {
    dq = dq * w + q;
    q = q * w + c[k];
    bound = bound * aw + std::abs(c[k]);
  }
  // p/p' = z / (N - w q'/q)
  return {z / (static_cast<double>(n) - w * dq / q),
          std::abs(q) <= 4.0 * n * kEps * bound, std::abs(q)};
}

std::vector<cplx> initial_guesses(std::span<const cplx> c) {
  const int n = static_cast<int>(c.size()) - 1;
  // upper convex hull of (k, log|c_k|)
  std::vector<int> hull;
  std::vector<double> lg(n + 1);
  for (int k = 0; k <= n; ++k) {
    lg[k] = std::abs(c[k]) > 0.0 ? std::log(std::abs(c[k]))
                                 : -std::numeric_limits<double>::infinity();
  }
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(lg[k])) continue;
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      const double cross = (b - a) * (lg[k] - lg[a]) - (k - a) * (lg[b] - lg[a]);
      if (cross >= 0.0) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  std::vector<cplx> z;
  z.reserve(n);
  const double sigma = 0.7;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const int a = hull[i], b = hull[i + 1];
    const double radius = std::exp((lg[a] - lg[b]) / (b - a));
    for (int j = 0; j < b - a; ++j) {
      const double angle = 2.0 * kPi * j / (b - a) + 2.0 * kPi * i / n + sigma;
      z.push_back(std::polar(radius, angle));
    }
  }
  return z;
}

}  // namespace

RootSet find_roots(std::span<const cplx> coefficients) {
  double cmax = 0.0;
  for (cplx v : coefficients) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) {
    throw Error(ErrorCode::ZeroPolynomial, "cannot find roots of the zero polynomial");
  }
  std::size_t top = coefficients.size();
  while (top > 0 && std::abs(coefficients[top - 1]) < 1e-14 * cmax) --top;
  std::size_t low = 0;
  while (low < top && coefficients[low] == 0.0) ++low;

  RootSet out;
  out.roots.assign(low, cplx(0.0));
  out.residuals.assign(low, 0.0);
  const std::span<const cplx> c = coefficients.subspan(low, top - low);
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return out;
  if (n == 1) {
    const cplx r = -c[0] / c[1];
    out.roots.push_back(r);
    out.residuals.push_back(newton_term(c, r).residual);
    return out;
  }

  std::vector<cplx> z = initial_guesses(c);
  std::vector<char> done(n, 0);
  int remaining = n;
  const int max_iter = 500;
  int it = 0;
  for (; it < max_iter && remaining > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const NewtonTerm t = newton_term(c, z[i]);
      if (t.small_residual) {
        done[i] = 1;
        --remaining;
        continue;
      }
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      const cplx step = t.ratio / (1.0 - t.ratio * sum);
      z[i] -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  out.iterations = it;
  out.converged = remaining == 0;
  for (int i = 0; i < n; ++i) {
    const NewtonTerm t = newton_term(c, z[i]);
    cplx polished = z[i] - t.ratio;
    NewtonTerm tp = newton_term(c, polished);
    // keep the polished value unless it made things worse
    if (!(tp.residual <= t.residual) || !is_finite(polished)) {
      polished = z[i];
      tp = t;
    }
    out.roots.push_back(polished);
    out.residuals.push_back(tp.residual);
  }
  return out;
}

}  // namespace randcrit
