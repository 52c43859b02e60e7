// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgeqed/errors.hpp"

namespace edgeqed {

using cplx = std::complex<double>;

// Complex amplitude per linear index of a SiteMap (lattice sites first, then qubit slots).
using ModeField = std::vector<cplx>;

enum class Boundary { periodic, open };
enum class Sublattice : int { A = 0, B = 1 };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// Honeycomb strip with a zigzag edge at row n = 0. Rows run along e1 into the bulk,
// columns along e2 parallel to the edge.
struct LatticeSpec {
  int n1 = 2;
  int n2 = 2;
  double delta = 0.0;
  double beta = 1.0;
  double j = 1.0;
  Boundary boundary_e2 = Boundary::periodic;

  // Every violated constraint, empty when valid.
  std::vector<std::string> violations() const;
  // Throws ConfigError listing all violations.
  void validate() const;

  std::size_t lattice_sites() const { return 2 * std::size_t(n1) * std::size_t(n2); }
};

struct SiteIndex {
  int n = 0;
  int m = 0;
  Sublattice sublattice = Sublattice::A;
  bool operator==(const SiteIndex&) const = default;
};

struct Emitter {
  int m = 0;
  double g = 0.05;
  double detuning = 0.0;
};

// Emitters side-coupled to the A sites of the edge row.
struct QubitArrangement {
  std::vector<Emitter> qubits;

  std::size_t size() const { return qubits.size(); }
  bool empty() const { return qubits.empty(); }
  std::vector<int> positions() const;
  // Distinct cells inside [0, n2), g >= 0, one shared detuning and coupling.
  std::vector<std::string> violations(int n2) const;
  void validate(int n2) const;
  double shared_detuning() const;
  double shared_coupling() const;
};

// Dense bijection between (n, m, sublattice) or qubit labels and matrix rows.
class SiteMap {
 public:
  SiteMap() = default;
  SiteMap(int n1, int n2, Boundary boundary, std::size_t num_qubits = 0);

  int rows() const { return n1_; }
  int columns() const { return n2_; }
  Boundary boundary() const { return boundary_; }
  std::size_t lattice_sites() const { return 2 * std::size_t(n1_) * std::size_t(n2_); }
  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t size() const { return lattice_sites() + num_qubits_; }

  // Column index folded into [0, n2) for periodic strips; open strips require it already.
  int wrap(int m) const;
  bool contains(SiteIndex s) const;
  std::size_t index(SiteIndex s) const;
  std::size_t index(int n, int m, Sublattice s) const { return index(SiteIndex{n, m, s}); }
  SiteIndex site(std::size_t idx) const;
  bool is_qubit(std::size_t idx) const { return idx >= lattice_sites() && idx < size(); }
  std::size_t qubit_index(std::size_t q) const;

  SiteMap with_qubits(std::size_t num_qubits) const;

 private:
  int n1_ = 0;
  int n2_ = 0;
  Boundary boundary_ = Boundary::periodic;
  std::size_t num_qubits_ = 0;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  cplx value;
};

// Compressed-row Hermitian matrix. Columns are sorted within each row and duplicates
// are summed at construction, so iteration order (and therefore matvec rounding) is fixed.
class SparseHermitian {
 public:
  SparseHermitian() = default;
  static SparseHermitian from_triplets(SiteMap map, std::vector<Triplet> entries);

  std::size_t dimension() const { return map_.size(); }
  std::size_t nonzeros() const { return values_.size(); }
  const SiteMap& site_map() const { return map_; }
  std::span<const std::size_t> row_offsets() const { return offsets_; }
  std::span<const std::size_t> column_indices() const { return columns_; }
  std::span<const cplx> values() const { return values_; }

  cplx at(std::size_t row, std::size_t col) const;
  std::vector<Triplet> triplets() const;

  // y = H x. Rows are split across OpenMP threads when available; each row sums its
  // entries in column order, so the result does not depend on the thread count.
  void multiply(std::span<const cplx> x, std::span<cplx> y) const;
  ModeField apply(std::span<const cplx> x) const;

  // Bitwise check that (j,i) stores conj of (i,j) for every stored entry.
  bool is_hermitian() const;
  // Lower and upper Gershgorin bounds of the (real) spectrum.
  std::pair<double, double> gershgorin_bounds() const;
  bool is_real() const;

  void write_matrix_market(std::ostream& os) const;

 private:
  SiteMap map_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> columns_;
  std::vector<cplx> values_;
};

SparseHermitian build_bath_hamiltonian(const LatticeSpec& spec);

// Appends one row per qubit (in arrangement order) with diagonal = detuning and
// coupling g to the edge site a_{0,m}.
SparseHermitian attach_qubits(const SparseHermitian& h, const QubitArrangement& qubits);

// Number of undirected nearest-neighbour bonds of the strip.
std::size_t bond_count(const LatticeSpec& spec);

double norm(std::span<const cplx> v);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);  // conj(a) . b

}  // namespace edgeqed
