// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "edgeqed/errors.hpp"

namespace edgeqed {

// Adaptive bisection driven by an absolute error target. Boost's own adaptive driver
// measures error relative to the running estimate, which never terminates sensibly for
// integrals that cancel to (near) zero; here each panel is a 31-point Kronrod rule.
template <class F>
double integrate_abs(F&& f, double a, double b, double abs_tol, int max_depth = 30, double* error = nullptr) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Rec {
    F& f;
    int max_depth;
    double operator()(double lo, double hi, double tol, int depth, double& err) const {
      double e = 0.0;
      const double v = GK::integrate(f, lo, hi, 0, 0.0, &e);
      if (e <= tol || depth >= max_depth) {
        err += e;
        return v;
      }
      const double mid = 0.5 * (lo + hi);
      return (*this)(lo, mid, 0.5 * tol, depth + 1, err) + (*this)(mid, hi, 0.5 * tol, depth + 1, err);
    }
  };
  double err = 0.0;
  const double v = Rec{f, max_depth}(a, b, abs_tol, 0, err);
  if (error) *error = err;
  if (!std::isfinite(v) || err > 10.0 * abs_tol)
    throw ConvergenceError("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                           "] stopped at error " + std::to_string(err));
  return v;
}

}  // namespace edgeqed
