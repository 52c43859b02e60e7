// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/propagators.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace edgeqed {

std::string to_string(Engine e) { return e == Engine::chebyshev ? "chebyshev" : "krylov"; }

Engine engine_from_string(const std::string& s) {
  if (s == "chebyshev") return Engine::chebyshev;
  if (s == "krylov") return Engine::krylov;
  throw ConfigError("engine must be \"chebyshev\" or \"krylov\", got \"" + s + "\"");
}

ChebyshevPropagator::ChebyshevPropagator(const SparseHermitian& h, const PropagatorOptions& opt)
    : h_(h), opt_(opt) {
  if (!(opt.tolerance > 0.0)) throw ConfigError("propagator tolerance must be > 0");
  const auto [lo, hi] = h.gershgorin_bounds();
  centre_ = 0.5 * (lo + hi);
  // Slight padding keeps rounding in the bounds from pushing eigenvalues outside [-1, 1].
  half_width_ = 0.5 * (hi - lo) * (1.0 + 1e-8) + 1e-12;
  const std::size_t n = h.dimension();
  v0_.resize(n);
  v1_.resize(n);
  v2_.resize(n);
  acc_.resize(n);
}

void ChebyshevPropagator::advance(ModeField& psi, double dt) {
  if (dt == 0.0) return;
  const double limit = opt_.max_chebyshev_argument / half_width_;
  const int pieces = int(std::ceil(std::abs(dt) / limit));
  for (int p = 0; p < pieces; ++p) step(psi, dt / pieces);
}

void ChebyshevPropagator::step(ModeField& psi, double dt) {
  if (psi.size() != h_.dimension()) throw std::invalid_argument("state size does not match Hamiltonian");
  const double x = half_width_ * dt;
  if (dt != cached_dt_) {
    coeff_.clear();
    const cplx minus_i{0.0, -1.0};
    cplx phase{1.0, 0.0};
    const double ax = std::abs(x);
    const int cap = int(ax) + 400;
    for (int k = 0;; ++k) {
      const double jk = std::cyl_bessel_j(double(k), ax) * ((x < 0 && (k % 2)) ? -1.0 : 1.0);
      coeff_.push_back((k == 0 ? 1.0 : 2.0) * phase * jk);
      phase *= minus_i;
      // Beyond k > |x| the Bessel tail decays faster than geometrically, so a few
      // consecutive small terms bound the remainder.
      if (k > ax && k >= 2 && std::abs(coeff_[std::size_t(k)]) + std::abs(coeff_[std::size_t(k) - 1]) <
                                  0.05 * opt_.tolerance)
        break;
      if (k > cap) throw ConvergenceError("Chebyshev series did not reach tolerance");
    }
    cached_dt_ = dt;
  }
  const std::size_t n = psi.size();
  const double c = centre_;
  const double inv_r = 1.0 / half_width_;
  v0_ = psi;
  h_.multiply(v0_, v1_);
  ++matvecs_;
  const cplx a0 = coeff_[0], a1 = coeff_.size() > 1 ? coeff_[1] : cplx{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    v1_[i] = (v1_[i] - c * v0_[i]) * inv_r;
    acc_[i] = a0 * v0_[i] + a1 * v1_[i];
  }
  for (std::size_t k = 2; k < coeff_.size(); ++k) {
    h_.multiply(v1_, v2_);
    ++matvecs_;
    const cplx ak = coeff_[k];
    for (std::size_t i = 0; i < n; ++i) {
      v2_[i] = 2.0 * inv_r * (v2_[i] - c * v1_[i]) - v0_[i];
      acc_[i] += ak * v2_[i];
    }
    std::swap(v0_, v1_);
    std::swap(v1_, v2_);
  }
  const cplx shift = std::polar(1.0, -c * dt);
  for (std::size_t i = 0; i < n; ++i) psi[i] = shift * acc_[i];
}

KrylovPropagator::KrylovPropagator(const SparseHermitian& h, const PropagatorOptions& opt) : h_(h), opt_(opt) {
  if (opt.krylov_min < 2 || opt.krylov_max < opt.krylov_min)
    throw ConfigError("Krylov subspace bounds must satisfy 2 <= min <= max");
  if (!(opt.tolerance > 0.0)) throw ConfigError("propagator tolerance must be > 0");
  w_.resize(h.dimension());
}

void KrylovPropagator::advance(ModeField& psi, double dt) {
  double remaining = dt;
  double tau = dt;
  int splits = 0;
  while (std::abs(remaining) > 1e-15 * std::max(1.0, std::abs(dt))) {
    if (std::abs(tau) > std::abs(remaining)) tau = remaining;
    if (try_step(psi, tau)) {
      remaining -= tau;
    } else {
      tau *= 0.5;
      if (++splits > 60) throw ConvergenceError("Krylov step did not reach tolerance");
    }
  }
}

bool KrylovPropagator::try_step(ModeField& psi, double dt) {
  const std::size_t n = psi.size();
  if (n != h_.dimension()) throw std::invalid_argument("state size does not match Hamiltonian");
  const double beta0 = norm(psi);
  if (beta0 == 0.0) return true;
  const int mmax = std::min<int>(opt_.krylov_max, int(n));
  if (basis_.size() < std::size_t(mmax) + 1) basis_.resize(std::size_t(mmax) + 1, ModeField(n));
  std::vector<double> alpha, beta;
  for (std::size_t i = 0; i < n; ++i) basis_[0][i] = psi[i] / beta0;

  auto small_exp = [&](int m, Eigen::VectorXcd& y) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::VectorXd d(m), e(std::max(m - 1, 0));
    for (int i = 0; i < m; ++i) d(i) = alpha[std::size_t(i)];
    for (int i = 0; i + 1 < m; ++i) e(i) = beta[std::size_t(i)];
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::VectorXcd coef(m);
    for (int i = 0; i < m; ++i) coef(i) = std::polar(1.0, -es.eigenvalues()(i) * dt) * v(0, i);
    y = v.cast<cplx>() * coef;
  };

  Eigen::VectorXcd y;
  for (int j = 0; j < mmax; ++j) {
    ModeField& vj = basis_[std::size_t(j)];
    h_.multiply(vj, w_);
    ++matvecs_;
    const double a = dot(vj, w_).real();
    alpha.push_back(a);
    for (std::size_t i = 0; i < n; ++i) w_[i] -= a * vj[i];
    if (j > 0) {
      const double b = beta.back();
      const ModeField& prev = basis_[std::size_t(j) - 1];
      for (std::size_t i = 0; i < n; ++i) w_[i] -= b * prev[i];
    }
    // Full reorthogonalization (one extra Gram-Schmidt sweep).
    for (int i = 0; i <= j; ++i) {
      const ModeField& vi = basis_[std::size_t(i)];
      const cplx proj = dot(vi, w_);
      for (std::size_t s = 0; s < n; ++s) w_[s] -= proj * vi[s];
    }
    const double b_next = norm(w_);
    const int m = j + 1;
    const bool invariant = b_next < 1e-13 * std::max(1.0, std::abs(a));
    if (invariant || m >= opt_.krylov_min || m == mmax) {
      small_exp(m, y);
      const double err = invariant ? 0.0 : beta0 * b_next * std::abs(y(m - 1));
      if (err <= opt_.tolerance) {
        std::fill(psi.begin(), psi.end(), cplx{0.0, 0.0});
        for (int i = 0; i < m; ++i) {
          const cplx c = beta0 * y(i);
          const ModeField& vi = basis_[std::size_t(i)];
          for (std::size_t s = 0; s < n; ++s) psi[s] += c * vi[s];
        }
        return true;
      }
      if (m == mmax) return false;
    }
    beta.push_back(b_next);
    ModeField& next = basis_[std::size_t(j) + 1];
    for (std::size_t i = 0; i < n; ++i) next[i] = w_[i] / b_next;
  }
  return false;
}

std::unique_ptr<TimePropagator> make_propagator(const SparseHermitian& h, const PropagatorOptions& opt) {
  if (opt.engine == Engine::krylov) return std::make_unique<KrylovPropagator>(h, opt);
  return std::make_unique<ChebyshevPropagator>(h, opt);
}

}  // namespace edgeqed
