#pragma once

#include <functional>
#include <vector>

namespace randcrit {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Adaptive Gauss-Kronrod on [a, b], split at the interior breakpoints.
// Throws QuadratureFailure when the error estimate exceeds
// max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol, double abs_tol = 0.0,
                           const std::vector<double>& breakpoints = {});

// Iterated adaptive quadrature over a rectangle; inner integrals run at a
// tenth of the requested tolerance.
QuadratureResult integrate_rect(const std::function<double(double, double)>& f,
                                double x0, double x1, double y0, double y1,
                                double rel_tol,
                                const std::vector<double>& x_breaks = {},
                                const std::vector<double>& y_breaks = {});

}  // namespace randcrit
