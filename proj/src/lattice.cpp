// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace edgeqed {

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw ConfigError("boundary must be \"periodic\" or \"open\", got \"" + s + "\"");
}

namespace {

std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

std::vector<std::string> LatticeSpec::violations() const {
  std::vector<std::string> out;
  if (n1 < 2) out.push_back("lattice.n1 must be >= 2 (got " + std::to_string(n1) + ")");
  if (n2 < 2) out.push_back("lattice.n2 must be >= 2 (got " + std::to_string(n2) + ")");
  if (!(beta > 0.0) || !std::isfinite(beta)) out.push_back("lattice.beta must be > 0");
  if (!(j > 0.0) || !std::isfinite(j)) out.push_back("lattice.j must be > 0");
  if (!std::isfinite(delta)) out.push_back("lattice.delta must be finite");
  return out;
}

void LatticeSpec::validate() const {
  auto v = violations();
  if (!v.empty()) throw ConfigError(join_lines(v));
}

std::vector<int> QubitArrangement::positions() const {
  std::vector<int> p;
  p.reserve(qubits.size());
  for (const auto& q : qubits) p.push_back(q.m);
  return p;
}

std::vector<std::string> QubitArrangement::violations(int n2) const {
  std::vector<std::string> out;
  std::set<int> seen;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto& q = qubits[i];
    const std::string tag = "qubits[" + std::to_string(i) + "]";
    if (q.m < 0 || q.m >= n2)
      out.push_back(tag + ".m=" + std::to_string(q.m) + " out of range [0, " + std::to_string(n2) + ")");
    if (!seen.insert(q.m).second) out.push_back(tag + ": duplicate position m=" + std::to_string(q.m));
    if (!(q.g >= 0.0) || !std::isfinite(q.g)) out.push_back(tag + ".g must be >= 0");
    if (!std::isfinite(q.detuning)) out.push_back(tag + ".detuning must be finite");
    if (i > 0 && q.detuning != qubits[0].detuning)
      out.push_back(tag + ": all qubits must share one detuning");
    if (i > 0 && q.g != qubits[0].g) out.push_back(tag + ": all qubits must share one coupling g");
  }
  return out;
}

void QubitArrangement::validate(int n2) const {
  auto v = violations(n2);
  if (!v.empty()) throw ConfigError(join_lines(v));
}

double QubitArrangement::shared_detuning() const {
  if (qubits.empty()) throw ConfigError("at least one qubit required");
  return qubits.front().detuning;
}

double QubitArrangement::shared_coupling() const {
  if (qubits.empty()) throw ConfigError("at least one qubit required");
  return qubits.front().g;
}

SiteMap::SiteMap(int n1, int n2, Boundary boundary, std::size_t num_qubits)
    : n1_(n1), n2_(n2), boundary_(boundary), num_qubits_(num_qubits) {
  if (n1 < 1 || n2 < 1) throw ConfigError("site map needs positive extents");
}

int SiteMap::wrap(int m) const {
  if (boundary_ == Boundary::periodic) {
    int r = m % n2_;
    return r < 0 ? r + n2_ : r;
  }
  return m;
}

bool SiteMap::contains(SiteIndex s) const {
  if (s.n < 0 || s.n >= n1_) return false;
  const int m = wrap(s.m);
  return m >= 0 && m < n2_;
}

std::size_t SiteMap::index(SiteIndex s) const {
  if (!contains(s))
    throw std::out_of_range("site (n=" + std::to_string(s.n) + ", m=" + std::to_string(s.m) +
                            ") outside the strip");
  const std::size_t cell = std::size_t(s.n) * std::size_t(n2_) + std::size_t(wrap(s.m));
  return 2 * cell + std::size_t(static_cast<int>(s.sublattice));
}

SiteIndex SiteMap::site(std::size_t idx) const {
  if (idx >= lattice_sites()) throw std::out_of_range("index does not name a lattice site");
  const std::size_t cell = idx / 2;
  return SiteIndex{int(cell / std::size_t(n2_)), int(cell % std::size_t(n2_)),
                   (idx % 2) ? Sublattice::B : Sublattice::A};
}

std::size_t SiteMap::qubit_index(std::size_t q) const {
  if (q >= num_qubits_) throw std::out_of_range("qubit slot out of range");
  return lattice_sites() + q;
}

SiteMap SiteMap::with_qubits(std::size_t num_qubits) const {
  SiteMap m = *this;
  m.num_qubits_ = num_qubits;
  return m;
}

SparseHermitian SparseHermitian::from_triplets(SiteMap map, std::vector<Triplet> entries) {
  const std::size_t dim = map.size();
  for (const auto& t : entries)
    if (t.row >= dim || t.col >= dim) throw std::out_of_range("triplet outside matrix dimension");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseHermitian h;
  h.map_ = std::move(map);
  h.offsets_.assign(dim + 1, 0);
  h.columns_.reserve(entries.size());
  h.values_.reserve(entries.size());
  std::size_t i = 0;
  for (std::size_t row = 0; row < dim; ++row) {
    while (i < entries.size() && entries[i].row == row) {
      const std::size_t col = entries[i].col;
      cplx v = entries[i].value;
      ++i;
      while (i < entries.size() && entries[i].row == row && entries[i].col == col) v += entries[i++].value;
      h.columns_.push_back(col);
      h.values_.push_back(v);
    }
    h.offsets_[row + 1] = h.columns_.size();
  }
  return h;
}

cplx SparseHermitian::at(std::size_t row, std::size_t col) const {
  if (row >= dimension() || col >= dimension()) throw std::out_of_range("matrix index");
  auto first = columns_.begin() + std::ptrdiff_t(offsets_[row]);
  auto last = columns_.begin() + std::ptrdiff_t(offsets_[row + 1]);
  auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return {0.0, 0.0};
  return values_[std::size_t(it - columns_.begin())];
}

std::vector<Triplet> SparseHermitian::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (std::size_t r = 0; r < dimension(); ++r)
    for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p) out.push_back({r, columns_[p], values_[p]});
  return out;
}

void SparseHermitian::multiply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t dim = dimension();
  if (x.size() != dim || y.size() != dim) throw std::invalid_argument("matvec size mismatch");
  const std::size_t* off = offsets_.data();
  const std::size_t* col = columns_.data();
  const cplx* val = values_.data();
  const std::ptrdiff_t n = std::ptrdiff_t(dim);
#pragma omp parallel for schedule(static) if (dim > 20000)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    cplx acc{0.0, 0.0};
    for (std::size_t p = off[r]; p < off[r + 1]; ++p) acc += val[p] * x[col[p]];
    y[std::size_t(r)] = acc;
  }
}

ModeField SparseHermitian::apply(std::span<const cplx> x) const {
  ModeField y(dimension());
  multiply(x, y);
  return y;
}

bool SparseHermitian::is_hermitian() const {
  for (std::size_t r = 0; r < dimension(); ++r)
    for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p) {
      const std::size_t c = columns_[p];
      auto first = columns_.begin() + std::ptrdiff_t(offsets_[c]);
      auto last = columns_.begin() + std::ptrdiff_t(offsets_[c + 1]);
      auto it = std::lower_bound(first, last, r);
      if (it == last || *it != r) return false;
      const cplx mirrored = values_[std::size_t(it - columns_.begin())];
      if (mirrored != std::conj(values_[p])) return false;
    }
  return true;
}

std::pair<double, double> SparseHermitian::gershgorin_bounds() const {
  if (dimension() == 0) throw ConvergenceError("spectral bounds of an empty matrix");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t r = 0; r < dimension(); ++r) {
    double centre = 0.0, radius = 0.0;
    for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p) {
      if (columns_[p] == r)
        centre = values_[p].real();
      else
        radius += std::abs(values_[p]);
    }
    lo = std::min(lo, centre - radius);
    hi = std::max(hi, centre + radius);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConvergenceError("non-finite Gershgorin bounds");
  return {lo, hi};
}

bool SparseHermitian::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

void SparseHermitian::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate complex hermitian\n";
  os << "% lower triangle, 1-based\n";
  std::size_t lower = 0;
  for (std::size_t r = 0; r < dimension(); ++r)
    for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p)
      if (columns_[p] <= r) ++lower;
  os << dimension() << ' ' << dimension() << ' ' << lower << '\n';
  os << std::setprecision(17);
  for (std::size_t r = 0; r < dimension(); ++r)
    for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p)
      if (columns_[p] <= r)
        os << r + 1 << ' ' << columns_[p] + 1 << ' ' << values_[p].real() << ' ' << values_[p].imag() << '\n';
}

SparseHermitian build_bath_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  SiteMap map(spec.n1, spec.n2, spec.boundary_e2);
  std::vector<Triplet> t;
  t.reserve(map.lattice_sites() * 4);
  const double j = spec.j;
  const double jb = spec.beta * spec.j;
  auto bond = [&](std::size_t a, std::size_t b, double w) {
    t.push_back({a, b, w});
    t.push_back({b, a, w});
  };
  for (int n = 0; n < spec.n1; ++n)
    for (int m = 0; m < spec.n2; ++m) {
      const std::size_t a = map.index(n, m, Sublattice::A);
      const std::size_t b = map.index(n, m, Sublattice::B);
      t.push_back({a, a, spec.delta});
      t.push_back({b, b, -spec.delta});
      bond(b, a, j);
      if (spec.boundary_e2 == Boundary::periodic || m + 1 < spec.n2)
        bond(b, map.index(n, m + 1, Sublattice::A), j);
      if (n + 1 < spec.n1) bond(b, map.index(n + 1, m, Sublattice::A), jb);
    }
  return SparseHermitian::from_triplets(std::move(map), std::move(t));
}

SparseHermitian attach_qubits(const SparseHermitian& h, const QubitArrangement& qubits) {
  if (qubits.empty()) return h;
  const SiteMap& base = h.site_map();
  if (base.num_qubits() != 0) throw ConfigError("matrix already carries qubits");
  {
    std::set<int> seen;
    for (const auto& q : qubits.qubits) {
      if (q.m < 0 || q.m >= base.columns())
        throw ConfigError("qubit position m=" + std::to_string(q.m) + " out of range [0, " +
                          std::to_string(base.columns()) + ")");
      if (!seen.insert(q.m).second) throw ConfigError("duplicate qubit position m=" + std::to_string(q.m));
    }
  }
  SiteMap map = base.with_qubits(qubits.size());
  std::vector<Triplet> t = h.triplets();
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    const auto& q = qubits.qubits[k];
    const std::size_t row = map.qubit_index(k);
    const std::size_t site = map.index(0, q.m, Sublattice::A);
    t.push_back({row, row, q.detuning});
    if (q.g != 0.0) {
      t.push_back({row, site, q.g});
      t.push_back({site, row, q.g});
    }
  }
  return SparseHermitian::from_triplets(std::move(map), std::move(t));
}

std::size_t bond_count(const LatticeSpec& spec) {
  const std::size_t n1 = std::size_t(spec.n1), n2 = std::size_t(spec.n2);
  const std::size_t intra = n1 * n2;
  const std::size_t across = spec.boundary_e2 == Boundary::periodic ? n1 * n2 : n1 * (n2 - 1);
  const std::size_t inward = (n1 - 1) * n2;
  return intra + across + inward;
}

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot size mismatch");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace edgeqed
