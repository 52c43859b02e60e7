// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "edgeqed/lattice.hpp"

namespace edgeqed {

// Lower edge 2 arccos(beta/2) of the edge-mode momentum window; 0 once beta >= 2.
double support_edge(double beta);

// Cardinal sine sin(x)/x with the removable point filled in.
double sinc(double x);

// Edge-row amplitude c(0, m) of the emergent cavity mode (closed form). It equals the
// flat-band projector element between edge sites m apart.
double cavity_edge_amplitude(int m, double beta);

// c(n, m) from adaptive Gauss-Kronrod quadrature over the edge-mode momenta.
double cavity_amplitude(int n, int m, double beta, double abs_tol = 1e-9);

// Inverse edge-row weight 1 / c(0,0): the cavity volume.
double cavity_volume(double beta);

struct CavityFieldOptions {
  double abs_tol = 1e-9;
  int max_panels = 1 << 16;
};

// Cavity mode centred on edge cell m0, unnormalized (its squared norm approaches
// c(0,0) on large strips). Periodic strips place c(n, m - m0) at the nearest image.
ModeField cavity_field(const LatticeSpec& spec, int m0, const CavityFieldOptions& opt = {});

struct ProjectorBlock {
  std::vector<int> positions;
  Eigen::MatrixXd projector;      // P_ij = c(0, m_i - m_j)
  Eigen::MatrixXd orthonormalizer;  // symmetric M with M M^T = P
};

// Throws ConfigError for coincident positions and DomainError if P is not positive definite.
ProjectorBlock orthonormalize(std::span<const int> positions, double beta);

// Amplitudes of the best candidate for a compact flat-band state at beta >= 2. Row n
// is nonzero on columns m0 - n .. m0 with value (-1)^n beta^-n binom(n, m0 - m).
struct CompactStateTable {
  int n_max = 0;
  int m_min = 0;
  int m_max = 0;
  int m0 = 0;
  double beta = 2.0;
  std::vector<std::vector<double>> amplitude;  // [n][m - m_min]
  std::vector<int> nonzero_per_row;
  std::vector<double> row_norm2;
  std::vector<double> cumulative_norm2;
};

CompactStateTable compact_state_amplitudes(int n_max, int m_min, int m_max, int m0, double beta = 2.0);

// Exact binomial coefficient as a decimal string (big-integer arithmetic).
std::string binomial_exact(int n, int k);

}  // namespace edgeqed
