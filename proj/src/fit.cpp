// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "edgeqed/errors.hpp"

namespace edgeqed {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw ConvergenceError("fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConvergenceError("fit needs two distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.points = int(n);
  return f;
}

LineFit power_law_fit(std::span<const double> x, std::span<const double> y, double drop_below) {
  if (x.size() != y.size()) throw std::invalid_argument("power_law_fit: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::abs(y[i]);
    if (!(x[i] > 0.0) || !(a > 0.0) || a < drop_below) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(a));
  }
  return fit_line(lx, ly);
}

std::vector<std::size_t> local_maxima(std::span<const double> y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const double a = std::abs(y[i - 1]), b = std::abs(y[i]), c = std::abs(y[i + 1]);
    if (b >= a && b > c) out.push_back(i);
  }
  return out;
}

LineFit power_law_envelope_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("power_law_envelope_fit: size mismatch");
  std::vector<double> px, py;
  for (std::size_t i : local_maxima(y)) {
    px.push_back(x[i]);
    py.push_back(y[i]);
  }
  return power_law_fit(px, py);
}

}  // namespace edgeqed
