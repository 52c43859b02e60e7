// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "edgeqed/lattice.hpp"

namespace edgeqed {

struct BandPair {
  double omega_plus;
  double omega_minus;
};

// Bulk bands of the strip, labelled by momentum k along the edge and q across it.
BandPair bulk_dispersion(double k, double q, const LatticeSpec& spec);

// Effective intra-cell hopping 2 J cos(k/2) of the one-dimensional chain at momentum k.
double chain_hopping(double k, double j = 1.0);

// Momenta carrying a zero-frequency edge mode.
struct FlatBandSupport {
  bool full_zone = false;
  double k_min = 0.0;  // lower bound on |k|; edge modes exist for k_min < |k| <= pi
  double k_max = 0.0;
  bool contains(double k) const;
  // Fraction of the Brillouin zone covered.
  double fraction() const;
};

FlatBandSupport flat_band_support(double beta);

// Map any real momentum into (-pi, pi].
double wrap_momentum(double k);

struct EdgeMode {
  double k = 0.0;
  double decay_ratio = 0.0;    // |amplitude(n+1)| / |amplitude(n)|
  double normalization = 0.0;  // N_k
  double penetration_length = 0.0;
  double frequency = 0.0;
};

// Throws DomainError naming the support boundary when k carries no edge mode.
EdgeMode edge_mode(double k, const LatticeSpec& spec);

// Thermodynamic amplitude of the k edge mode on A site (n, m); normalized per column
// of the semi-infinite strip to 1/(2 pi).
cplx edge_mode_amplitude(const EdgeMode& mode, int n, int m);

// Edge-mode field on the finite strip, rescaled to unit norm. B sites are zero.
ModeField edge_mode_field(double k, const LatticeSpec& spec);

// All edge modes on the periodic grid k = 2 pi p / n2. Momenta whose penetration length
// exceeds max_penetration are listed in `skipped` instead of being built.
struct EdgeModeSet {
  std::vector<double> momenta;
  std::vector<double> skipped;
  std::vector<ModeField> fields;
};

EdgeModeSet edge_modes_on_grid(const LatticeSpec& spec, double max_penetration, bool build_fields = true);

// Default cutoff for the penetration length: n1 / 10.
double default_max_penetration(const LatticeSpec& spec);

// Full sorted spectrum by dense diagonalization.
std::vector<double> dense_spectrum(const SparseHermitian& h, std::size_t max_dimension = 20000);

struct DiracPoint {
  double k;
  double q;
  double omega;
};

// Grid search for min |omega_plus| over k in [0, pi], q in [0, pi].
DiracPoint locate_dirac_point(const LatticeSpec& spec, int grid);

}  // namespace edgeqed
