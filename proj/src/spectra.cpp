// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace edgeqed {

using std::numbers::pi;

double chain_hopping(double k, double j) { return 2.0 * j * std::cos(0.5 * k); }

BandPair bulk_dispersion(double k, double q, const LatticeSpec& spec) {
  const double jt = chain_hopping(k, spec.j);
  const double jb = spec.beta * spec.j;
  const double r2 = spec.delta * spec.delta + jb * jb + jt * jt + 2.0 * jb * jt * std::cos(q);
  const double w = std::sqrt(std::max(r2, 0.0));
  return {w, -w};
}

double wrap_momentum(double k) {
  double r = std::remainder(k, 2.0 * pi);  // in [-pi, pi]
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

FlatBandSupport flat_band_support(double beta) {
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  FlatBandSupport s;
  s.k_max = pi;
  if (beta >= 2.0) {
    s.full_zone = true;
    s.k_min = 0.0;
  } else {
    s.k_min = 2.0 * std::acos(0.5 * beta);
  }
  return s;
}

bool FlatBandSupport::contains(double k) const {
  const double a = std::abs(wrap_momentum(k));
  if (full_zone) return true;
  return a > k_min;
}

double FlatBandSupport::fraction() const { return full_zone ? 1.0 : (pi - k_min) / pi; }

EdgeMode edge_mode(double k, const LatticeSpec& spec) {
  const double kw = wrap_momentum(k);
  // cos(k/2) written as sin((pi - |k|)/2) so that k = pi gives an exact zero.
  const double ratio = 2.0 * std::sin(0.5 * (pi - std::abs(kw))) / spec.beta;
  if (!(ratio < 1.0)) {
    std::ostringstream msg;
    msg << "k=" << k << " carries no edge mode: support is 2*arccos(beta/2) < |k| <= pi";
    if (spec.beta < 2.0)
      msg << " with 2*arccos(beta/2)=" << 2.0 * std::acos(0.5 * spec.beta);
    else
      msg << " (beta >= 2: all k except the point where 2cos(k/2) = beta)";
    throw DomainError(msg.str());
  }
  EdgeMode e;
  e.k = kw;
  e.decay_ratio = ratio;
  e.normalization = std::sqrt(1.0 - ratio * ratio);
  e.penetration_length = ratio == 0.0 ? 0.0 : -1.0 / std::log(ratio);
  e.frequency = spec.delta;
  return e;
}

cplx edge_mode_amplitude(const EdgeMode& mode, int n, int m) {
  const double mag = mode.normalization / std::sqrt(2.0 * pi) * std::pow(mode.decay_ratio, n);
  const double sign = (n % 2) ? -1.0 : 1.0;
  return sign * mag * std::polar(1.0, -mode.k * (m + 0.5 * n));
}

ModeField edge_mode_field(double k, const LatticeSpec& spec) {
  spec.validate();
  const EdgeMode mode = edge_mode(k, spec);
  if (spec.boundary_e2 == Boundary::periodic) {
    const double p = k * spec.n2 / (2.0 * pi);
    if (std::abs(p - std::round(p)) > 1e-9)
      throw DomainError("k=" + std::to_string(k) + " is not on the periodic grid 2 pi p / n2 of this strip");
  }
  SiteMap map(spec.n1, spec.n2, spec.boundary_e2);
  ModeField f(map.size(), cplx{0.0, 0.0});
  for (int n = 0; n < spec.n1; ++n) {
    const cplx row = edge_mode_amplitude(mode, n, 0);
    if (row == cplx{0.0, 0.0}) break;
    for (int m = 0; m < spec.n2; ++m)
      f[map.index(n, m, Sublattice::A)] = row * std::polar(1.0, -mode.k * m);
  }
  const double nrm = norm(f);
  for (auto& x : f) x /= nrm;
  return f;
}

double default_max_penetration(const LatticeSpec& spec) { return spec.n1 / 10.0; }

EdgeModeSet edge_modes_on_grid(const LatticeSpec& spec, double max_penetration, bool build_fields) {
  spec.validate();
  const FlatBandSupport support = flat_band_support(spec.beta);
  EdgeModeSet out;
  for (int p = 0; p < spec.n2; ++p) {
    const double k = wrap_momentum(2.0 * pi * p / spec.n2);
    if (!support.contains(k)) continue;
    EdgeMode mode;
    try {
      mode = edge_mode(k, spec);
    } catch (const DomainError&) {
      continue;
    }
    if (mode.penetration_length > max_penetration) {
      out.skipped.push_back(k);
      continue;
    }
    out.momenta.push_back(k);
    if (build_fields) out.fields.push_back(edge_mode_field(k, spec));
  }
  return out;
}

std::vector<double> dense_spectrum(const SparseHermitian& h, std::size_t max_dimension) {
  const std::size_t dim = h.dimension();
  if (dim > max_dimension)
    throw ConfigError("dense spectrum refused: dimension " + std::to_string(dim) + " exceeds " +
                      std::to_string(max_dimension));
  const auto off = h.row_offsets();
  const auto col = h.column_indices();
  const auto val = h.values();
  std::vector<double> ev(dim);
  if (h.is_real()) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(dim), Eigen::Index(dim));
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t p = off[r]; p < off[r + 1]; ++p) a(Eigen::Index(r), Eigen::Index(col[p])) = val[p].real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
    for (std::size_t i = 0; i < dim; ++i) ev[i] = es.eigenvalues()(Eigen::Index(i));
  } else {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(Eigen::Index(dim), Eigen::Index(dim));
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t p = off[r]; p < off[r + 1]; ++p) a(Eigen::Index(r), Eigen::Index(col[p])) = val[p];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
    for (std::size_t i = 0; i < dim; ++i) ev[i] = es.eigenvalues()(Eigen::Index(i));
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

DiracPoint locate_dirac_point(const LatticeSpec& spec, int grid) {
  if (grid < 2) throw ConfigError("Dirac-point grid needs at least 2 points");
  DiracPoint best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (int a = 0; a < grid; ++a) {
    const double k = pi * a / (grid - 1);
    for (int b = 0; b < grid; ++b) {
      const double q = pi * b / (grid - 1);
      const double w = bulk_dispersion(k, q, spec).omega_plus;
      if (w < best.omega) best = {k, q, w};
    }
  }
  return best;
}

}  // namespace edgeqed
