#pragma once

#include <functional>

namespace substatic::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
Result gauss_kronrod15(const std::function<double(double)>& fn, double a, double b);

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Throws
/// ErrorCode::quadrature_nonconvergence when the tolerance is not met within
/// `max_panels` bisections.
Result integrate(const std::function<double(double)>& fn, double a, double b,
                 double abs_tol = 1e-14, double rel_tol = 1e-13, int max_panels = 4000);

}  // namespace substatic::quad
