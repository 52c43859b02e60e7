// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "edgeqed/lattice.hpp"
#include "edgeqed/spectra.hpp"
#include "oracles.hpp"

using namespace edgeqed;

namespace {

LatticeSpec strip(int n1, int n2, double delta = 0.0, double beta = 1.0, Boundary b = Boundary::periodic) {
  LatticeSpec s;
  s.n1 = n1;
  s.n2 = n2;
  s.delta = delta;
  s.beta = beta;
  s.boundary_e2 = b;
  return s;
}

std::size_t off_diagonal_count(const SparseHermitian& h, std::size_t row) {
  std::size_t c = 0;
  const auto off = h.row_offsets();
  const auto col = h.column_indices();
  for (std::size_t p = off[row]; p < off[row + 1]; ++p)
    if (col[p] != row) ++c;
  return c;
}

}  // namespace

TEST_CASE("spec validation rejects bad extents and parameters") {
  CHECK_THROWS_AS(build_bath_hamiltonian(strip(1, 4)), ConfigError);
  CHECK_THROWS_AS(build_bath_hamiltonian(strip(4, 1)), ConfigError);
  CHECK_THROWS_AS(build_bath_hamiltonian(strip(4, 4, 0.0, 0.0)), ConfigError);
  CHECK_THROWS_AS(build_bath_hamiltonian(strip(4, 4, 0.0, -1.0)), ConfigError);
  LatticeSpec s = strip(4, 4);
  s.j = 0.0;
  CHECK_THROWS_AS(build_bath_hamiltonian(s), ConfigError);
  LatticeSpec bad = strip(1, 1, 0.0, -2.0);
  CHECK(bad.violations().size() == 3);
}

TEST_CASE("site linearization round-trips") {
  for (Boundary b : {Boundary::periodic, Boundary::open}) {
    SiteMap map(5, 7, b);
    for (std::size_t i = 0; i < map.lattice_sites(); ++i) CHECK(map.index(map.site(i)) == i);
    CHECK(map.index(2, 3, Sublattice::B) == 2 * (2 * 7 + 3) + 1);
  }
  SiteMap periodic(3, 4, Boundary::periodic);
  CHECK(periodic.index(1, -1, Sublattice::A) == periodic.index(1, 3, Sublattice::A));
  CHECK(periodic.index(1, 4, Sublattice::A) == periodic.index(1, 0, Sublattice::A));
  SiteMap open(3, 4, Boundary::open);
  CHECK_THROWS_AS(open.index(1, 4, Sublattice::A), std::out_of_range);
  CHECK_THROWS_AS(open.index(3, 0, Sublattice::A), std::out_of_range);
}

TEST_CASE("2x2 periodic strip: coordination, Hermiticity and chiral spectrum") {
  const auto h = build_bath_hamiltonian(strip(2, 2));
  CHECK(h.dimension() == 8);
  CHECK(h.is_hermitian());
  const SiteMap& map = h.site_map();
  // Edge A sites have no bond toward n = -1: two neighbours (intra-cell B and the B of
  // the previous column). The far-row B sites likewise have two.
  for (int m = 0; m < 2; ++m) {
    CHECK(off_diagonal_count(h, map.index(0, m, Sublattice::A)) == 2);
    CHECK(off_diagonal_count(h, map.index(1, m, Sublattice::A)) == 3);
    CHECK(off_diagonal_count(h, map.index(0, m, Sublattice::B)) == 3);
    CHECK(off_diagonal_count(h, map.index(1, m, Sublattice::B)) == 2);
  }
  const auto ev = dense_spectrum(h);
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(-ev[ev.size() - 1 - i]).epsilon(1e-12));
}

TEST_CASE("diagonal is +delta on A and -delta on B") {
  const auto h = build_bath_hamiltonian(strip(6, 5, 0.3));
  const SiteMap& map = h.site_map();
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    const double d = h.at(i, i).real();
    CHECK(d == (map.site(i).sublattice == Sublattice::A ? 0.3 : -0.3));
  }
}

TEST_CASE("hopping values: J inside rows, beta J across rows") {
  auto s = strip(4, 6, 0.0, 1.7);
  s.j = 0.8;
  const auto h = build_bath_hamiltonian(s);
  const SiteMap& map = h.site_map();
  CHECK(h.at(map.index(2, 3, Sublattice::B), map.index(2, 3, Sublattice::A)) == cplx(0.8));
  CHECK(h.at(map.index(2, 3, Sublattice::B), map.index(2, 4, Sublattice::A)) == cplx(0.8));
  CHECK(h.at(map.index(2, 3, Sublattice::B), map.index(3, 3, Sublattice::A)).real() == doctest::Approx(1.36));
  CHECK(h.at(map.index(2, 3, Sublattice::A), map.index(1, 3, Sublattice::B)).real() == doctest::Approx(1.36));
}

TEST_CASE("bond count matches geometric enumeration") {
  for (Boundary b : {Boundary::periodic, Boundary::open})
    for (auto [n1, n2] : {std::pair{2, 3}, {5, 4}, {7, 9}, {3, 12}}) {
      const auto s = strip(n1, n2, 0.0, 1.0, b);
      const auto h = build_bath_hamiltonian(s);
      const auto bonds = oracle::geometric_bonds(s);
      CHECK(bonds.size() == bond_count(s));
      std::size_t stored = 0;
      for (const auto& t : h.triplets())
        if (t.row < t.col) {
          ++stored;
          CHECK(bonds.count({t.row, t.col}) == 1);
        }
      CHECK(stored == bonds.size());
    }
}

TEST_CASE("600x600 strip: dimension and nonzero budget") {
  const auto s = strip(600, 600);
  const auto h = build_bath_hamiltonian(s);
  CHECK(h.dimension() == 720000);
  CHECK(h.nonzeros() <= 6 * 720000);
  // diagonal + both directions of every bond
  CHECK(h.nonzeros() == 720000 + 2 * bond_count(s));
}

TEST_CASE("chiral symmetry: H anticommutes with the sublattice sign at delta = 0") {
  const auto h = build_bath_hamiltonian(strip(6, 8, 0.0, 1.3, Boundary::open));
  const auto a = oracle::dense(h);
  Eigen::VectorXcd sign(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) sign(i) = (i % 2) ? -1.0 : 1.0;
  const Eigen::MatrixXcd s = sign.asDiagonal();
  CHECK((s * a + a * s).norm() == 0.0);
}

TEST_CASE("attach_qubits appends rows with detuning and one coupling") {
  const auto bath = build_bath_hamiltonian(strip(4, 6));
  QubitArrangement none;
  const auto same = attach_qubits(bath, none);
  CHECK(same.dimension() == bath.dimension());
  CHECK(same.nonzeros() == bath.nonzeros());

  QubitArrangement one{{Emitter{0, 0.05, 0.0}}};
  const auto h1 = attach_qubits(bath, one);
  CHECK(h1.dimension() == bath.dimension() + 1);
  const std::size_t q = h1.site_map().qubit_index(0);
  CHECK(off_diagonal_count(h1, q) == 1);
  CHECK(h1.at(q, h1.site_map().index(0, 0, Sublattice::A)) == cplx(0.05));
  CHECK(h1.is_hermitian());

  QubitArrangement two{{Emitter{0, 0.05, 0.1}, Emitter{2, 0.05, 0.1}}};
  const auto h2 = attach_qubits(bath, two);
  CHECK(h2.dimension() == bath.dimension() + 2);
  CHECK(h2.at(h2.site_map().qubit_index(0), h2.site_map().index(0, 0, Sublattice::A)) == cplx(0.05));
  CHECK(h2.at(h2.site_map().qubit_index(1), h2.site_map().index(0, 2, Sublattice::A)) == cplx(0.05));
  CHECK(h2.at(h2.site_map().qubit_index(1), h2.site_map().qubit_index(1)) == cplx(0.1));

  QubitArrangement dup{{Emitter{1, 0.05, 0.0}, Emitter{1, 0.05, 0.0}}};
  CHECK_THROWS_AS(attach_qubits(bath, dup), ConfigError);
  QubitArrangement far{{Emitter{6, 0.05, 0.0}}};
  CHECK_THROWS_AS(attach_qubits(bath, far), ConfigError);
}

TEST_CASE("triplet assembly sums duplicates and sorts columns") {
  SiteMap map(2, 2, Boundary::periodic);
  std::vector<Triplet> t{{0, 3, 1.0}, {0, 1, 2.0}, {0, 3, 0.5}, {3, 0, 1.5}, {1, 0, 2.0}};
  const auto h = SparseHermitian::from_triplets(map, t);
  CHECK(h.at(0, 3) == cplx(1.5));
  CHECK(h.column_indices()[0] == 1);
  CHECK(h.column_indices()[1] == 3);
  CHECK(h.is_hermitian());
  std::vector<Triplet> broken{{0, 1, cplx(0.0, 1.0)}, {1, 0, cplx(0.0, 1.0)}};
  CHECK_FALSE(SparseHermitian::from_triplets(map, broken).is_hermitian());
}

TEST_CASE("Gershgorin bounds enclose the spectrum") {
  const auto h = build_bath_hamiltonian(strip(5, 6, 0.2, 1.4));
  const auto [lo, hi] = h.gershgorin_bounds();
  const auto ev = dense_spectrum(h);
  CHECK(lo <= ev.front());
  CHECK(hi >= ev.back());
  CHECK(hi == doctest::Approx(0.2 + 2.0 + 1.4));
}

TEST_CASE("matvec agrees with dense product") {
  const auto h = build_bath_hamiltonian(strip(4, 5, 0.1, 0.7, Boundary::open));
  std::vector<cplx> x(h.dimension());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = cplx(std::sin(1.0 + i), std::cos(0.3 * i));
  const auto y = h.apply(x);
  Eigen::Map<Eigen::VectorXcd> xv(x.data(), Eigen::Index(x.size()));
  const Eigen::VectorXcd ref = oracle::dense(h) * xv;
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - ref(Eigen::Index(i))) < 1e-14);
}

TEST_CASE("MatrixMarket export lists the lower triangle") {
  const auto h = build_bath_hamiltonian(strip(2, 2, 0.3));
  std::ostringstream os;
  h.write_matrix_market(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "%%MatrixMarket matrix coordinate complex hermitian");
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line == "8 8 " + std::to_string(8 + bond_count(strip(2, 2))));
}
