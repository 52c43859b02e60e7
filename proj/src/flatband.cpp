// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/flatband.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <set>

#include "edgeqed/quadrature.hpp"

namespace edgeqed {

using std::numbers::pi;

double support_edge(double beta) {
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  return beta < 2.0 ? 2.0 * std::acos(0.5 * beta) : 0.0;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

namespace {

// Integral of cos(j k) over [t, pi].
double cos_window(int j, double t) {
  if (j == 0) return pi - t;
  return -std::sin(t * j) / j;
}

}  // namespace

double cavity_edge_amplitude(int m, double beta) {
  // Over the support the weight 1 - r^2 is linear in cos k, so each Fourier coefficient
  // reduces to three elementary window integrals.
  const double t = support_edge(beta);
  const int a = std::abs(m);
  const double b2 = beta * beta;
  return ((1.0 - 2.0 / b2) * cos_window(a, t) - (cos_window(a + 1, t) + cos_window(a - 1, t)) / b2) / pi;
}

double cavity_amplitude(int n, int m, double beta, double abs_tol) {
  if (n < 0) throw DomainError("row index must be >= 0");
  const double t = support_edge(beta);
  const double phase = m + 0.5 * n;
  auto f = [&](double k) {
    const double r = 2.0 * std::cos(0.5 * k) / beta;
    return (1.0 - r * r) * std::pow(r, n) * std::cos(k * phase);
  };
  double v;
  try {
    v = integrate_abs(f, t, pi, abs_tol * pi);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("cavity amplitude (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                           "): " + e.what());
  }
  return ((n % 2) ? -v : v) / pi;
}

double cavity_volume(double beta) { return 1.0 / cavity_edge_amplitude(0, beta); }

namespace {

struct PanelRule {
  std::vector<double> node;    // on [-1, 1]
  std::vector<double> weight;
};

const PanelRule& gauss16() {
  static const PanelRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 16>;
    PanelRule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.node.push_back(x[i]);
      r.weight.push_back(w[i]);
      if (x[i] != 0.0) {
        r.node.push_back(-x[i]);
        r.weight.push_back(w[i]);
      }
    }
    return r;
  }();
  return rule;
}

// Row n of the cavity field for offsets d in [d_lo, d_hi], composite 16-point Gauss rule
// with `panels` equal panels on [t, pi].
void cavity_row(int n, int d_lo, int d_hi, double beta, double t, int panels, std::vector<double>& out) {
  const PanelRule& rule = gauss16();
  const std::size_t width = std::size_t(d_hi - d_lo + 1);
  out.assign(width, 0.0);
  std::vector<cplx> acc(width, cplx{0.0, 0.0});
  const double h = (pi - t) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = t + (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.node.size(); ++i) {
      const double k = mid + 0.5 * h * rule.node[i];
      const double r = 2.0 * std::cos(0.5 * k) / beta;
      const double w = 0.5 * h * rule.weight[i] * (1.0 - r * r) * std::pow(r, n);
      if (w == 0.0) continue;
      cplx z = w * std::polar(1.0, k * (d_lo + 0.5 * n));
      const cplx step = std::polar(1.0, k);
      for (std::size_t j = 0; j < width; ++j) {
        acc[j] += z;
        z *= step;
      }
    }
  }
  const double sign = (n % 2) ? -1.0 / pi : 1.0 / pi;
  for (std::size_t j = 0; j < width; ++j) out[j] = sign * acc[j].real();
}

}  // namespace

ModeField cavity_field(const LatticeSpec& spec, int m0, const CavityFieldOptions& opt) {
  spec.validate();
  SiteMap map(spec.n1, spec.n2, spec.boundary_e2);
  if (m0 < 0 || m0 >= spec.n2) throw ConfigError("cavity centre m0 outside [0, n2)");
  int d_lo, d_hi;
  if (spec.boundary_e2 == Boundary::periodic) {
    d_lo = -(spec.n2 / 2);
    d_hi = d_lo + spec.n2 - 1;
  } else {
    d_lo = -m0;
    d_hi = spec.n2 - 1 - m0;
  }
  const double t = support_edge(spec.beta);
  ModeField f(map.size(), cplx{0.0, 0.0});
  std::vector<double> coarse, fine;
  const int dmax = std::max(std::abs(d_lo), std::abs(d_hi));
  int panels = 4;
  for (int n = 0; n < spec.n1; ++n) {
    const double freq = dmax + 0.5 * n;
    panels = std::max(panels, int(std::ceil(freq * (pi - t) / 4.0)) + 4);
    cavity_row(n, d_lo, d_hi, spec.beta, t, panels, coarse);
    for (;;) {
      if (2 * panels > opt.max_panels)
        throw ConvergenceError("cavity field row n=" + std::to_string(n) + " (offsets " + std::to_string(d_lo) +
                               ".." + std::to_string(d_hi) + ") did not converge");
      cavity_row(n, d_lo, d_hi, spec.beta, t, 2 * panels, fine);
      double diff = 0.0;
      for (std::size_t j = 0; j < fine.size(); ++j) diff = std::max(diff, std::abs(fine[j] - coarse[j]));
      if (diff <= opt.abs_tol) break;
      panels *= 2;
      coarse.swap(fine);
    }
    for (int d = d_lo; d <= d_hi; ++d)
      f[map.index(n, m0 + d, Sublattice::A)] = fine[std::size_t(d - d_lo)];
  }
  return f;
}

ProjectorBlock orthonormalize(std::span<const int> positions, double beta) {
  if (positions.empty()) throw ConfigError("at least one qubit required");
  std::set<int> seen;
  for (int m : positions)
    if (!seen.insert(m).second) throw ConfigError("coincident qubit positions m=" + std::to_string(m));
  const Eigen::Index n = Eigen::Index(positions.size());
  ProjectorBlock out;
  out.positions.assign(positions.begin(), positions.end());
  out.projector.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out.projector(i, j) = cavity_edge_amplitude(positions[std::size_t(i)] - positions[std::size_t(j)], beta);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.projector);
  if (es.info() != Eigen::Success) throw ConvergenceError("projector eigendecomposition failed");
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-12 * lmax))
    throw DomainError("projector block is not positive definite for this placement");
  out.orthonormalizer =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  out.orthonormalizer = 0.5 * (out.orthonormalizer + out.orthonormalizer.transpose()).eval();
  return out;
}

namespace {

boost::multiprecision::cpp_int binomial_big(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  boost::multiprecision::cpp_int c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

std::string binomial_exact(int n, int k) { return binomial_big(n, k).str(); }

CompactStateTable compact_state_amplitudes(int n_max, int m_min, int m_max, int m0, double beta) {
  if (n_max < 0 || n_max > 1000) throw ConfigError("n_max must lie in [0, 1000]");
  if (m_max < m_min) throw ConfigError("empty column range");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  CompactStateTable t;
  t.n_max = n_max;
  t.m_min = m_min;
  t.m_max = m_max;
  t.m0 = m0;
  t.beta = beta;
  double cumulative = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<double> row(std::size_t(m_max - m_min + 1), 0.0);
    int nonzero = 0;
    double norm2 = 0.0;
    const double scale = ((n % 2) ? -1.0 : 1.0) * std::pow(beta, -n);
    // walk j = m0 - m across the row, updating C(n, j) in place
    boost::multiprecision::cpp_int c = 1;
    for (int j = 0; j <= n; ++j) {
      if (j > 0) c = c * (n - j + 1) / j;
      const int m = m0 - j;
      if (m < m_min || m > m_max) continue;
      const double v = scale * c.convert_to<double>();
      row[std::size_t(m - m_min)] = v;
      ++nonzero;
      norm2 += v * v;
    }
    cumulative += norm2;
    t.amplitude.push_back(std::move(row));
    t.nonzero_per_row.push_back(nonzero);
    t.row_norm2.push_back(norm2);
    t.cumulative_norm2.push_back(cumulative);
  }
  return t;
}

}  // namespace edgeqed
