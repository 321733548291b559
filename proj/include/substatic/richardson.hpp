#pragma once

#include <vector>

namespace substatic::richardson {

/// Observed order from three values at refinement ratio `ratio` (coarse,
/// medium, fine). Returns +inf when the two differences are both at roundoff
/// level relative to `scale`, NaN when the sequence is not monotone.
double observed_order(double coarse, double medium, double fine, double ratio = 2.0,
                      double scale = 1.0);

/// Q* = fine + (fine - medium) / (ratio^p - 1).
double extrapolate(double medium, double fine, double order, double ratio = 2.0);

/// Polynomial (Neville) extrapolation of samples y(x_k) to x = 0.
double neville_at_zero(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace substatic::richardson
