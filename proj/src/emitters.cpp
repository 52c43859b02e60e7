// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/emitters.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "edgeqed/quadrature.hpp"

namespace edgeqed {

using std::numbers::pi;

double rabi_coupling(double g, double beta) {
  if (g < 0.0) throw ConfigError("g must be >= 0");
  return g * std::sqrt(cavity_edge_amplitude(0, beta));
}

double gamma_smalldelta(double detuning, double beta, int separation, double g) {
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (detuning == 0.0) return 0.0;
  const double a = std::abs(detuning);
  if (!(beta < 2.0) || a > beta || a > 2.0 - beta) {
    std::ostringstream msg;
    msg << "linear decay law invalid for detuning=" << detuning << ", beta=" << beta
        << " (needs beta < 2, |detuning| <= beta and |detuning| <= 2 - beta); use gamma_quadrature";
    throw DomainError(msg.str());
  }
  const double phase = 2.0 * std::abs(separation) * std::acos(0.5 * beta);
  return 2.0 * g * g * a * std::cos(phase) / (beta * std::sqrt(4.0 - beta * beta));
}

double gamma_quadrature(double detuning, double beta, int separation, double g, double rel_tol) {
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (detuning == 0.0) return 0.0;
  const double a = std::abs(detuning);
  // y = cos(k/2); the band at momentum k covers |beta - 2y| <= |omega| <= beta + 2y.
  const double c0 = 0.5 * std::abs(beta - a);
  const double c1 = std::min(0.5 * (beta + a), 1.0);
  if (!(c0 < c1)) {
    std::ostringstream msg;
    msg << "detuning=" << detuning << " lies outside the bulk band for beta=" << beta;
    throw DomainError(msg.str());
  }
  const double twice_m = 2.0 * std::abs(separation);
  auto f = [&](double y, double yc) {
    // yc is the signed distance to the nearer endpoint; it keeps 1 - y accurate at y -> 1.
    const double one_minus_y = (c1 == 1.0 && yc > 0.0) ? yc : 1.0 - y;
    const double lo = a * a - (2.0 * y - beta) * (2.0 * y - beta);
    const double hi = (2.0 * y + beta) * (2.0 * y + beta) - a * a;
    const double radicand = std::max(lo, 0.0) * std::max(hi, 0.0);
    const double cheb = std::cos(twice_m * std::acos(std::clamp(y, -1.0, 1.0)));
    return std::sqrt(radicand) * cheb / std::sqrt(one_minus_y * (1.0 + y));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(f, c0, c1, rel_tol, &err, &l1);
  if (!std::isfinite(v) || err > 1e3 * rel_tol * std::max(l1, 1e-300))
    throw ConvergenceError("decay-rate quadrature did not converge");
  return g * g * 2.0 * v / (beta * beta * pi * a);
}

double bulk_green(double detuning, double delta, int m, double rel_tol) {
  if (!(std::abs(detuning) < delta))
    throw DomainError("bulk Green's function requires |detuning| < delta (frequency inside the gap)");
  // The q integral is done in closed form: with a = 1 + Jt^2, b = 2 Jt and
  // c = delta^2 - detuning^2 + 1 + Jt^2, integral_0^pi sin^2 q / (x + b cos q) dq =
  // pi (x - sqrt(x^2 - b^2)) / b^2, and the two denominators separate by partial fractions.
  const double d2 = delta * delta - detuning * detuning;
  auto f = [&](double k) {
    const double jt = 2.0 * std::cos(0.5 * k);
    const double a = 1.0 + jt * jt;
    const double b = 2.0 * jt;
    const double c = d2 + a;
    const double inner = (a - std::abs(1.0 - jt * jt)) - (c - std::sqrt((c - b) * (c + b)));
    return std::cos(k * m) * inner;
  };
  const double kink = 2.0 * pi / 3.0;
  // The integrand is O(1); an absolute target well below rel_tol keeps the relative
  // error of G(m) in budget for the |m| <= 100 range used here.
  const double tol = 1e-3 * rel_tol;
  const double v = integrate_abs(f, 0.0, kink, tol) + integrate_abs(f, kink, pi, tol);
  return v / (2.0 * pi * (detuning - delta));
}

double dispersive_potential(int m, double detuning, double delta) {
  return cavity_edge_amplitude(m, 1.0) + (detuning - delta) * bulk_green(detuning, delta, m);
}

Eigen::MatrixXd decay_matrix(const QubitArrangement& q, double beta, GammaMethod method) {
  const Eigen::Index n = Eigen::Index(q.size());
  Eigen::MatrixXd gam(n, n);
  const double g = q.shared_coupling();
  const double det = q.shared_detuning();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const int sep = q.qubits[std::size_t(i)].m - q.qubits[std::size_t(j)].m;
      const double v = method == GammaMethod::small_detuning ? gamma_smalldelta(det, beta, sep, g)
                                                             : gamma_quadrature(det, beta, sep, g);
      gam(i, j) = gam(j, i) = v;
    }
  return gam;
}

Eigen::MatrixXd dispersive_couplings(const QubitArrangement& q, double delta, double beta,
                                     std::vector<std::string>* warnings) {
  if (beta != 1.0) throw DomainError("dispersive couplings are implemented for beta = 1 only");
  const double det = q.shared_detuning();
  const double g = q.shared_coupling();
  if (!(std::abs(det) < delta)) throw DomainError("dispersive couplings need |detuning| < delta");
  const double omega = rabi_coupling(g, beta);
  if (warnings && std::abs(det - delta) < 5.0 * omega) {
    std::ostringstream msg;
    msg << "weakly dispersive: |detuning - delta| / Omega = " << std::abs(det - delta) / omega << " < 5";
    warnings->push_back(msg.str());
  }
  const Eigen::Index n = Eigen::Index(q.size());
  Eigen::MatrixXd k(n, n);
  std::vector<std::pair<int, double>> cache;
  auto potential = [&](int sep) {
    sep = std::abs(sep);
    for (const auto& [s, v] : cache)
      if (s == sep) return v;
    const double v = dispersive_potential(sep, det, delta);
    cache.emplace_back(sep, v);
    return v;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = g * g / (det - delta) * potential(q.qubits[std::size_t(i)].m - q.qubits[std::size_t(j)].m);
      k(i, j) = k(j, i) = v;
    }
  return k;
}

EffectiveModel build_effective_model(const QubitArrangement& q, const LatticeSpec& spec, GammaMethod method) {
  spec.validate();
  if (q.empty()) throw ConfigError("at least one qubit required");
  q.validate(spec.n2);
  EffectiveModel em;
  em.g = q.shared_coupling() / spec.j;
  const double det = q.shared_detuning() / spec.j;
  const double delta = spec.delta / spec.j;
  em.detuning = det - delta;
  em.projector = orthonormalize(q.positions(), spec.beta);
  em.omega = rabi_coupling(em.g, spec.beta);
  em.omega_rabi = std::sqrt(em.detuning * em.detuning + 4.0 * em.omega * em.omega);
  const Eigen::Index n = Eigen::Index(q.size());
  if (delta != 0.0 && std::abs(det) < std::abs(delta)) {
    em.gamma = Eigen::MatrixXd::Zero(n, n);
    if (spec.beta == 1.0 && delta > 0.0) {
      QubitArrangement scaled = q;
      for (auto& e : scaled.qubits) {
        e.g /= spec.j;
        e.detuning /= spec.j;
      }
      em.dispersive = dispersive_couplings(scaled, delta, 1.0, &em.warnings);
    } else {
      em.warnings.push_back("dispersive couplings skipped: implemented for beta = 1 and delta > 0 only");
    }
  } else if (delta != 0.0) {
    throw DomainError("decay rates for emitters resonant with the bulk are implemented for delta = 0 only");
  } else {
    QubitArrangement scaled = q;
    for (auto& e : scaled.qubits) {
      e.g /= spec.j;
      e.detuning /= spec.j;
    }
    em.gamma = decay_matrix(scaled, spec.beta, method);
    // reported, not clamped
    if (n > 1) {
      const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(em.gamma, Eigen::EigenvaluesOnly).eigenvalues()(0);
      if (lo < -1e-12 * std::max(1.0, em.gamma.cwiseAbs().maxCoeff())) {
        std::ostringstream os;
        os << "decay matrix is not positive semidefinite (smallest eigenvalue " << lo << ")";
        em.warnings.push_back(os.str());
      }
    }
  }
  return em;
}

}  // namespace edgeqed
