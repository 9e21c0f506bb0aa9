#pragma once

// Trapezoid quadrature over one period with interval doubling. For smooth
// periodic integrands the trapezoid rule converges geometrically, so the
// difference between successive levels is a usable error estimate.
// Accumulation is compensated (Kahan) to keep rounding below tight
// absolute targets on sharply peaked integrands.

#include <cmath>
#include <utility>

#include "brw/errors.hpp"

namespace brw {

namespace detail {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int points = 0;
  bool converged = false;
};

template <class F>
QuadratureResult integrate_periodic(F&& f, double a, double b, double abs_tol = 1e-12,
                                    int max_points = (1 << 22)) {
  if (!(b > a)) throw validation_error("integrate_periodic: empty interval");
  if (!(abs_tol > 0.0)) throw validation_error("integrate_periodic: abs_tol must be positive");
  const double length = b - a;
  int n = 16;
  detail::KahanSum acc;
  for (int i = 0; i < n; ++i) acc.add(f(a + length * i / n));
  double prev = acc.sum * (length / n);
  QuadratureResult out;
  while (n < max_points) {
    // add the midpoints of the current panels
    for (int i = 0; i < n; ++i) acc.add(f(a + length * (2 * i + 1) / (2 * n)));
    n *= 2;
    const double cur = acc.sum * (length / n);
    out.value = cur;
    out.error_estimate = std::abs(cur - prev);
    out.points = n;
    if (n >= 64 && out.error_estimate <= abs_tol) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  return out;
}

}  // namespace brw
