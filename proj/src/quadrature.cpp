#include "substatic/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>

#include "substatic/errors.hpp"

namespace substatic::quad {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (0.949.., 0.741.., 0.405.., 0).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Result r;
  bool operator<(const Panel& other) const { return r.error < other.r.error; }
};

}  // namespace

Result gauss_kronrod15(const std::function<double(double)>& fn, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fn(mid);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double s = fn(mid - dx) + fn(mid + dx);
    kronrod += kKronrodWeights[j] * s;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * s;
  }
  Result r;
  r.value = kronrod * half;
  r.error = std::abs((kronrod - gauss) * half);
  r.evaluations = 15;
  return r;
}

Result integrate(const std::function<double(double)>& fn, double a, double b, double abs_tol,
                 double rel_tol, int max_panels) {
  if (a == b) return {};
  std::priority_queue<Panel> queue;
  Result total = gauss_kronrod15(fn, a, b);
  queue.push({a, b, total});
  int evaluations = total.evaluations;
  int panels = 1;
  double value = total.value, error = total.error;
  while (true) {
    if (error <= std::max(abs_tol, rel_tol * std::abs(value))) {
      // Re-sum to shed drift from the running totals.
      double v = 0.0, e = 0.0;
      for (auto copy = queue; !copy.empty(); copy.pop()) {
        v += copy.top().r.value;
        e += copy.top().r.error;
      }
      return {v, e, evaluations};
    }
    if (panels >= max_panels) {
      throw Error(ErrorCode::quadrature_nonconvergence,
                  "adaptive Gauss-Kronrod did not reach tolerance (error estimate " +
                      std::to_string(error) + ")");
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorCode::quadrature_nonconvergence, "panel width underflow");
    }
    Result left = gauss_kronrod15(fn, worst.a, mid);
    Result right = gauss_kronrod15(fn, mid, worst.b);
    evaluations += left.evaluations + right.evaluations;
    value += left.value + right.value - worst.r.value;
    error += left.error + right.error - worst.r.error;
    queue.push({worst.a, mid, left});
    queue.push({mid, worst.b, right});
    ++panels;
  }
}

}  // namespace substatic::quad
