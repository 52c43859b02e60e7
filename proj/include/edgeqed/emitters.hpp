// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "edgeqed/flatband.hpp"
#include "edgeqed/lattice.hpp"

namespace edgeqed {

// Vacuum Rabi coupling g * sqrt(c(0,0)) between one emitter and its cavity mode.
double rabi_coupling(double g, double beta);

// Linear low-detuning law for the decay rate into bulk modes. Valid for |detuning| <= beta,
// |detuning| <= 2 - beta and beta < 2; outside that window it throws DomainError
// (use gamma_quadrature).
double gamma_smalldelta(double detuning, double beta, int separation, double g = 1.0);

// Decay rate (or cross rate for separation != 0) from the reduced one-dimensional
// golden-rule integral over the bulk band at delta = 0.
double gamma_quadrature(double detuning, double beta, int separation, double g = 1.0, double rel_tol = 1e-10);

// Bulk-mode part of the edge-site Green's function at isotropic hopping, for a frequency
// inside the gap |detuning| < delta.
double bulk_green(double detuning, double delta, int m, double rel_tol = 1e-7);

enum class GammaMethod { small_detuning, quadrature };

// gamma_ij for all emitter pairs (uses |m_i - m_j|).
Eigen::MatrixXd decay_matrix(const QubitArrangement& q, double beta, GammaMethod method);

// Coherent exchange couplings inside the gap. Appends to `warnings` when
// |detuning - delta| < 5 * Omega.
Eigen::MatrixXd dispersive_couplings(const QubitArrangement& q, double delta, double beta = 1.0,
                                     std::vector<std::string>* warnings = nullptr);

// Dispersive potential V(m) = c(0,m) + (detuning - delta) G_bulk(m).
double dispersive_potential(int m, double detuning, double delta);

struct EffectiveModel {
  double g = 0.0;
  double detuning = 0.0;
  double omega = 0.0;       // single-emitter vacuum Rabi coupling
  double omega_rabi = 0.0;  // sqrt(detuning^2 + 4 omega^2)
  ProjectorBlock projector;
  Eigen::MatrixXd gamma;
  std::optional<Eigen::MatrixXd> dispersive;
  std::vector<std::string> warnings;
};

// Effective cavity-QED parameters for an arrangement on a strip. Resonant emitters
// (|detuning| >= delta) get decay rates from `method`; emitters inside the gap get zero
// decay and dispersive couplings (isotropic lattice only).
EffectiveModel build_effective_model(const QubitArrangement& q, const LatticeSpec& spec,
                                     GammaMethod method = GammaMethod::quadrature);

}  // namespace edgeqed
