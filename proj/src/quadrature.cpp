#include "randcrit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "randcrit/common.hpp"

namespace randcrit {

namespace {

constexpr unsigned kMaxDepth = 20;

std::vector<double> cut_points(double a, double b,
                               const std::vector<double>& breaks) {
  std::vector<double> pts{a};
  for (double p : breaks) {
    if (p > a && p < b) pts.push_back(p);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol, double abs_tol,
                           const std::vector<double>& breakpoints) {
  QuadratureResult total;
  if (!(b > a)) return total;
  const auto pts = cut_points(a, b, breakpoints);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, pts[i], pts[i + 1], kMaxDepth, rel_tol * 0.1, &err);
    total.value += v;
    total.error += err;
  }
  if (!std::isfinite(total.value) ||
      total.error > std::max(abs_tol, rel_tol * std::abs(total.value))) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b
        << "] did not converge: value " << total.value << ", error estimate "
        << total.error << ", rel_tol " << rel_tol << ", abs_tol " << abs_tol;
    throw Error(ErrorCode::QuadratureFailure, msg.str());
  }
  return total;
}

QuadratureResult integrate_rect(const std::function<double(double, double)>& f,
                                double x0, double x1, double y0, double y1,
                                double rel_tol,
                                const std::vector<double>& x_breaks,
                                const std::vector<double>& y_breaks) {
  if (!(x1 > x0) || !(y1 > y0)) return {};
  double inner_err = 0.0;
  auto inner = [&](double x) {
    auto fy = [&](double y) { return f(x, y); };
    const auto r = integrate(fy, y0, y1, rel_tol * 0.1, 1e-13, y_breaks);
    inner_err = std::max(inner_err, r.error);
    return r.value;
  };
  auto outer = integrate(inner, x0, x1, rel_tol, 0.0, x_breaks);
  outer.error += inner_err * (x1 - x0);
  return outer;
}

}  // namespace randcrit
