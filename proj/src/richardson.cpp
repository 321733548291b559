#include "substatic/richardson.hpp"

#include <cmath>
#include <limits>

#include "substatic/errors.hpp"

namespace substatic::richardson {

double observed_order(double coarse, double medium, double fine, double ratio, double scale) {
  const double d1 = medium - coarse;
  const double d2 = fine - medium;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(scale), 1e-300);
  if (std::abs(d1) <= noise && std::abs(d2) <= noise) return std::numeric_limits<double>::infinity();
  if (std::abs(d2) <= noise) return std::numeric_limits<double>::infinity();
  const double q = d1 / d2;
  if (!(q > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(q) / std::log(ratio);
}

double extrapolate(double medium, double fine, double order, double ratio) {
  if (!std::isfinite(order)) return fine;
  const double denom = std::pow(ratio, order) - 1.0;
  if (denom <= 0.0) return fine;
  return fine + (fine - medium) / denom;
}

double neville_at_zero(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorCode::invalid_argument, "neville_at_zero: mismatched samples");
  }
  std::vector<double> p = y;
  const std::size_t n = x.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double xi = x[i], xj = x[i + level];
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  }
  return p[0];
}

}  // namespace substatic::richardson
