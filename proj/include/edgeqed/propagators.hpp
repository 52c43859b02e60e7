// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "edgeqed/lattice.hpp"

namespace edgeqed {

enum class Engine { chebyshev, krylov };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

struct PropagatorOptions {
  Engine engine = Engine::chebyshev;
  double tolerance = 1e-9;  // per step
  int krylov_min = 20;
  int krylov_max = 60;
  // Longest Chebyshev step, in units of the spectral half-width times dt.
  double max_chebyshev_argument = 60.0;
};

// Applies exp(-i H dt) to a state in place.
class TimePropagator {
 public:
  virtual ~TimePropagator() = default;
  virtual void advance(ModeField& psi, double dt) = 0;
  std::size_t matvecs() const { return matvecs_; }

 protected:
  std::size_t matvecs_ = 0;
};

// Chebyshev expansion of the propagator on the spectrum mapped into [-1, 1] with
// Gershgorin bounds. Coefficients are Bessel functions; the series is cut once the
// remaining coefficient mass drops below the tolerance.
class ChebyshevPropagator final : public TimePropagator {
 public:
  ChebyshevPropagator(const SparseHermitian& h, const PropagatorOptions& opt);
  void advance(ModeField& psi, double dt) override;
  double centre() const { return centre_; }
  double half_width() const { return half_width_; }

 private:
  void step(ModeField& psi, double dt);
  const SparseHermitian& h_;
  PropagatorOptions opt_;
  double centre_ = 0.0;
  double half_width_ = 1.0;
  double cached_dt_ = -1.0;
  std::vector<cplx> coeff_;
  ModeField v0_, v1_, v2_, acc_;
};

// Lanczos projection with full reorthogonalization. The subspace grows from krylov_min
// to krylov_max until the a-posteriori error estimate meets the tolerance; otherwise
// the step is split.
class KrylovPropagator final : public TimePropagator {
 public:
  KrylovPropagator(const SparseHermitian& h, const PropagatorOptions& opt);
  void advance(ModeField& psi, double dt) override;

 private:
  bool try_step(ModeField& psi, double dt);
  const SparseHermitian& h_;
  PropagatorOptions opt_;
  std::vector<ModeField> basis_;
  ModeField w_;
};

std::unique_ptr<TimePropagator> make_propagator(const SparseHermitian& h, const PropagatorOptions& opt);

}  // namespace edgeqed
