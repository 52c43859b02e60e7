// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edgeqed/lattice.hpp"

namespace edgeqed {

// LC resonator lattice in SI units. Each site is an inductor Lg to ground in parallel with
// a capacitor; neighbouring sites are joined by Cc (beta * Cc across rows). The ground
// capacitance of every site is trimmed so that the total capacitance C_sigma is uniform.
struct CircuitSpec {
  double inductance = 7.0e-9;           // Lg [H]
  double ground_capacitance = 85e-15;   // Cg of a bulk site [F]
  double coupling_capacitance = 5e-15;  // Cc [F]
  double parasitic_capacitance = 0.0;   // optional direct second-neighbour capacitance [F]
  LatticeSpec lattice{12, 12, 0.0, 1.0, 1.0, Boundary::periodic};
  double sigma_rel = 0.0;  // relative spread of bare site frequencies
  std::uint64_t seed = 1;
  int realizations = 20;

  std::vector<std::string> violations() const;
  void validate() const;

  // Cg + (2 + beta) Cc (+ 6 Cp): the uniform diagonal of C.
  double total_capacitance() const;
  // 1 / sqrt(Lg C_sigma) [rad/s]
  double resonator_frequency() const;
  // Cc / C_sigma
  double coupling_ratio() const;
  // Leading-order hopping (Cc / C_sigma) omega_r / 2 [rad/s]
  double nominal_hopping() const;
};

// Spec with ground capacitance chosen so that C_sigma and omega_r hit the targets for a
// given Cc / C_sigma ratio.
CircuitSpec circuit_for_ratio(double coupling_ratio, double resonator_hz, double c_sigma, const LatticeSpec& lattice);

// Planar site positions (bond length 1) used to classify neighbour shells.
struct SitePosition {
  double x;
  double y;
};
SitePosition site_position(const SiteIndex& s);

Eigen::MatrixXd build_capacitance_matrix(const CircuitSpec& cs);

struct CircuitModes {
  Eigen::VectorXd frequencies;  // ascending [rad/s]
  Eigen::MatrixXd vectors;      // orthonormal columns in the symmetric (site) frame
};

// Normal modes of C phi'' = -L^-1 phi for arbitrary C and diagonal inverse inductances,
// via the symmetric matrix L^-1/2 C^-1 L^-1/2 (eigenvalues omega^2).
CircuitModes normal_modes(const Eigen::MatrixXd& capacitance, const Eigen::VectorXd& inverse_inductance);

// Inverse inductance per site; with disorder each bare frequency is omega_r (1 + sigma xi).
Eigen::VectorXd site_inverse_inductance(const CircuitSpec& cs, std::span<const double> xi = {});

CircuitModes circuit_modes(const CircuitSpec& cs, std::span<const double> xi = {});

// Symmetric frequency matrix U diag(omega) U^T in the site frame.
Eigen::MatrixXd mode_hamiltonian(const CircuitModes& modes);

struct HoppingFit {
  double j1 = 0.0;   // nearest neighbour (within a row), rad/s
  double j1_across = 0.0;  // nearest neighbour across rows (beta-scaled bond)
  double j2 = 0.0;   // second shell
  double j3 = 0.0;   // third shell
  double onsite_shift = 0.0;  // mean bulk diagonal minus omega_r
  double residual = 0.0;      // relative Frobenius norm of the unfitted bulk off-diagonal part
  std::size_t samples = 0;
};

// Least-squares fit of the clean mode Hamiltonian (bulk rows only) to shell hoppings.
HoppingFit extract_hoppings(const CircuitSpec& cs);

// Eigenfrequencies of the fitted tight-binding model on the same strip (sorted).
Eigen::VectorXd tight_binding_frequencies(const CircuitSpec& cs, const HoppingFit& fit);

struct FlatBandWidth {
  double sigma_rel = 0.0;
  std::vector<double> widths;  // per realization [rad/s]
  std::vector<int> cluster_sizes;
  double mean = 0.0;
  double stddev = 0.0;
  int failed = 0;  // realizations where no cluster could be identified
};

struct FlatBandOptions {
  int edge_rows = 2;               // rows counted as "edge" at each zigzag boundary
  double edge_weight_threshold = 0.5;
  double window_in_hoppings = 0.5;  // |omega - omega_r| window in nominal hoppings; excludes the k = pi dimers at +-beta J
};

// Disordered realizations share per-realization seeds derived from the master seed, so
// calling this with several sigma values reuses the same normal deviates.
FlatBandWidth disorder_flatband_width(const CircuitSpec& cs, const FlatBandOptions& opt = {});

// Per-realization standard normal deviates for the site frequencies.
std::vector<double> realization_deviates(std::uint64_t master_seed, int realization, std::size_t sites);

// Width of the edge cluster for one set of modes; negative when no cluster is found.
double edge_cluster_width(const CircuitSpec& cs, const CircuitModes& modes, const FlatBandOptions& opt,
                          int* cluster_size = nullptr);

// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace edgeqed
