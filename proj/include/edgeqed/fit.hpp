// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace edgeqed {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

// Ordinary least squares y = slope x + intercept. Needs two distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Slope of log|y| against log x. Points with |y| < drop_below are discarded (zeros of an
// oscillating prefactor).
LineFit power_law_fit(std::span<const double> x, std::span<const double> y, double drop_below = 0.0);

// Same, but only through the local maxima of |y|; for profiles whose oscillation
// period is incommensurate with the sampling.
LineFit power_law_envelope_fit(std::span<const double> x, std::span<const double> y);

// Indices of strict-or-plateau local maxima of |y| (end points excluded).
std::vector<std::size_t> local_maxima(std::span<const double> y);

}  // namespace edgeqed
