// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace edgeqed {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

const double kSqrt3 = std::sqrt(3.0);

// Euclidean distance with the minimum image along the edge for periodic strips.
double site_distance(const SiteIndex& a, const SiteIndex& b, const LatticeSpec& spec) {
  const SitePosition pa = site_position(a), pb = site_position(b);
  double dx = pb.x - pa.x;
  const double dy = pb.y - pa.y;
  if (spec.boundary_e2 == Boundary::periodic) {
    const double period = kSqrt3 * spec.n2;
    dx -= period * std::round(dx / period);
  }
  return std::hypot(dx, dy);
}

// 0 = not a tracked shell, 1 = bond length, 2 = sqrt(3), 3 = 2.
int shell_of(double d) {
  if (std::abs(d - 1.0) < 1e-6) return 1;
  if (std::abs(d - kSqrt3) < 1e-6) return 2;
  if (std::abs(d - 2.0) < 1e-6) return 3;
  return 0;
}

}  // namespace

std::vector<std::string> CircuitSpec::violations() const {
  std::vector<std::string> out = lattice.violations();
  if (!(inductance > 0.0)) out.push_back("circuit.Lg must be > 0");
  if (!(coupling_capacitance >= 0.0)) out.push_back("circuit.Cc must be >= 0");
  if (!(parasitic_capacitance >= 0.0)) out.push_back("circuit.Cp must be >= 0");
  if (!(ground_capacitance > 0.0)) out.push_back("circuit.Cg must be > 0");
  if (!(sigma_rel >= 0.0)) out.push_back("circuit.sigma_rel must be >= 0");
  if (realizations < 1) out.push_back("circuit.realizations must be >= 1");
  if (coupling_capacitance >= total_capacitance()) out.push_back("circuit.Cc must be below C_sigma");
  return out;
}

void CircuitSpec::validate() const {
  auto v = violations();
  if (!v.empty()) throw ConfigError(join(v));
}

double CircuitSpec::total_capacitance() const {
  return ground_capacitance + (2.0 + lattice.beta) * coupling_capacitance + 6.0 * parasitic_capacitance;
}

double CircuitSpec::resonator_frequency() const { return 1.0 / std::sqrt(inductance * total_capacitance()); }

double CircuitSpec::coupling_ratio() const { return coupling_capacitance / total_capacitance(); }

double CircuitSpec::nominal_hopping() const { return 0.5 * coupling_ratio() * resonator_frequency(); }

CircuitSpec circuit_for_ratio(double coupling_ratio, double resonator_hz, double c_sigma, const LatticeSpec& lattice) {
  CircuitSpec cs;
  cs.lattice = lattice;
  cs.coupling_capacitance = coupling_ratio * c_sigma;
  cs.ground_capacitance = c_sigma - (2.0 + lattice.beta) * cs.coupling_capacitance;
  const double w = 2.0 * std::numbers::pi * resonator_hz;
  cs.inductance = 1.0 / (w * w * c_sigma);
  return cs;
}

SitePosition site_position(const SiteIndex& s) {
  // e1 = (sqrt3/2, 3/2), e2 = (sqrt3, 0); B sits at the centroid of its three A partners.
  SitePosition p{kSqrt3 * (s.m + 0.5 * s.n), 1.5 * s.n};
  if (s.sublattice == Sublattice::B) {
    p.x += 0.5 * kSqrt3;
    p.y += 0.5;
  }
  return p;
}

Eigen::MatrixXd build_capacitance_matrix(const CircuitSpec& cs) {
  cs.validate();
  LatticeSpec topo = cs.lattice;
  topo.delta = 0.0;
  topo.j = 1.0;
  const SparseHermitian adj = build_bath_hamiltonian(topo);
  const Eigen::Index n = Eigen::Index(adj.dimension());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : adj.triplets())
    if (t.row != t.col) c(Eigen::Index(t.row), Eigen::Index(t.col)) -= cs.coupling_capacitance * t.value.real();
  if (cs.parasitic_capacitance > 0.0) {
    const SiteMap& map = adj.site_map();
    for (std::size_t i = 0; i < map.lattice_sites(); ++i)
      for (std::size_t j = i + 1; j < map.lattice_sites(); ++j)
        if (shell_of(site_distance(map.site(i), map.site(j), cs.lattice)) == 2) {
          c(Eigen::Index(i), Eigen::Index(j)) -= cs.parasitic_capacitance;
          c(Eigen::Index(j), Eigen::Index(i)) -= cs.parasitic_capacitance;
        }
  }
  // Edge sites have fewer coupling capacitors; their ground capacitor absorbs the
  // difference so the diagonal stays C_sigma everywhere.
  c.diagonal().setConstant(cs.total_capacitance());
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) throw ConfigError("capacitance matrix is not positive definite (Cc too large)");
  return c;
}

CircuitModes normal_modes(const Eigen::MatrixXd& capacitance, const Eigen::VectorXd& inverse_inductance) {
  const Eigen::Index n = capacitance.rows();
  if (capacitance.cols() != n || inverse_inductance.size() != n) throw ConfigError("circuit matrix size mismatch");
  if ((inverse_inductance.array() <= 0.0).any()) throw ConfigError("inductances must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(capacitance);
  if (llt.info() != Eigen::Success) throw ConfigError("capacitance matrix is not positive definite");
  const Eigen::MatrixXd cinv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::VectorXd d = inverse_inductance.cwiseSqrt();
  Eigen::MatrixXd s = d.asDiagonal() * cinv * d.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw ConvergenceError("circuit eigensolver failed");
  CircuitModes out;
  out.frequencies = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  out.vectors = es.eigenvectors();
  return out;
}

Eigen::VectorXd site_inverse_inductance(const CircuitSpec& cs, std::span<const double> xi) {
  const Eigen::Index n = Eigen::Index(cs.lattice.lattice_sites());
  Eigen::VectorXd linv = Eigen::VectorXd::Constant(n, 1.0 / cs.inductance);
  if (!xi.empty()) {
    if (Eigen::Index(xi.size()) != n) throw ConfigError("disorder vector has wrong length");
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = 1.0 + cs.sigma_rel * xi[std::size_t(i)];
      if (!(f > 0.0)) throw ConfigError("disorder drives a site frequency non-positive");
      linv(i) *= f * f;
    }
  }
  return linv;
}

CircuitModes circuit_modes(const CircuitSpec& cs, std::span<const double> xi) {
  if (cs.lattice.lattice_sites() > 10000) throw ConfigError("circuit_modes: more than 10000 sites");
  return normal_modes(build_capacitance_matrix(cs), site_inverse_inductance(cs, xi));
}

Eigen::MatrixXd mode_hamiltonian(const CircuitModes& modes) {
  return modes.vectors * modes.frequencies.asDiagonal() * modes.vectors.transpose();
}

HoppingFit extract_hoppings(const CircuitSpec& cs) {
  cs.validate();
  if (cs.lattice.n1 < 6) throw ConfigError("hopping fit needs at least 6 rows");
  const Eigen::MatrixXd h = mode_hamiltonian(circuit_modes(cs));
  const double wr = cs.resonator_frequency();
  const SiteMap map(cs.lattice.n1, cs.lattice.n2, cs.lattice.boundary_e2);
  const std::size_t n = map.lattice_sites();
  double sum[4] = {0, 0, 0, 0}, sum_across = 0.0, diag = 0.0;
  std::size_t cnt[4] = {0, 0, 0, 0}, cnt_across = 0, diag_cnt = 0;
  std::vector<int> shell(n * n, 0);
  std::vector<char> across(n * n, 0);
  auto bulk = [&](std::size_t i) {
    const int row = map.site(i).n;
    return row >= 2 && row < cs.lattice.n1 - 2;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!bulk(i)) continue;
    diag += h(Eigen::Index(i), Eigen::Index(i)) - wr;
    ++diag_cnt;
    const SiteIndex si = map.site(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const SiteIndex sj = map.site(j);
      const int s = shell_of(site_distance(si, sj, cs.lattice));
      shell[i * n + j] = s;
      const double v = h(Eigen::Index(i), Eigen::Index(j));
      if (s == 1 && std::abs(std::abs(site_position(sj).y - site_position(si).y) - 1.0) < 1e-9) {
        across[i * n + j] = 1;
        sum_across += v;
        ++cnt_across;
      } else if (s > 0) {
        sum[s] += v;
        ++cnt[s];
      }
    }
  }
  if (cnt[1] == 0 || cnt[2] == 0 || cnt[3] == 0 || cnt_across == 0)
    throw ConvergenceError("hopping fit is ill-conditioned: a neighbour shell has no bulk samples");
  HoppingFit fit;
  fit.j1 = sum[1] / double(cnt[1]);
  fit.j2 = sum[2] / double(cnt[2]);
  fit.j3 = sum[3] / double(cnt[3]);
  fit.j1_across = sum_across / double(cnt_across);
  fit.onsite_shift = diag / double(diag_cnt);
  fit.samples = cnt[1] + cnt[2] + cnt[3] + cnt_across;
  double res = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!bulk(i)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = h(Eigen::Index(i), Eigen::Index(j));
      double model = 0.0;
      const int s = shell[i * n + j];
      if (across[i * n + j])
        model = fit.j1_across;
      else if (s == 1)
        model = fit.j1;
      else if (s == 2)
        model = fit.j2;
      else if (s == 3)
        model = fit.j3;
      res += (v - model) * (v - model);
      total += v * v;
    }
  }
  fit.residual = total > 0.0 ? std::sqrt(res / total) : 0.0;
  return fit;
}

Eigen::VectorXd tight_binding_frequencies(const CircuitSpec& cs, const HoppingFit& fit) {
  const SiteMap map(cs.lattice.n1, cs.lattice.n2, cs.lattice.boundary_e2);
  const Eigen::Index n = Eigen::Index(map.lattice_sites());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h.diagonal().setConstant(cs.resonator_frequency() + fit.onsite_shift);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const SiteIndex si = map.site(std::size_t(i)), sj = map.site(std::size_t(j));
      const int s = shell_of(site_distance(si, sj, cs.lattice));
      double v = 0.0;
      if (s == 1)
        v = std::abs(std::abs(site_position(sj).y - site_position(si).y) - 1.0) < 1e-9 ? fit.j1_across : fit.j1;
      else if (s == 2)
        v = fit.j2;
      else if (s == 3)
        v = fit.j3;
      h(i, j) = h(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("tight-binding eigensolver failed");
  return es.eigenvalues();
}

std::vector<double> realization_deviates(std::uint64_t master_seed, int realization, std::size_t sites) {
  std::seed_seq seq{std::uint32_t(master_seed & 0xffffffffu), std::uint32_t(master_seed >> 32),
                    std::uint32_t(realization)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> xi(sites);
  for (auto& x : xi) x = normal(gen);
  return xi;
}

double edge_cluster_width(const CircuitSpec& cs, const CircuitModes& modes, const FlatBandOptions& opt,
                          int* cluster_size) {
  const SiteMap map(cs.lattice.n1, cs.lattice.n2, cs.lattice.boundary_e2);
  const double wr = cs.resonator_frequency();
  const double window = opt.window_in_hoppings * cs.nominal_hopping();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  int count = 0;
  for (Eigen::Index k = 0; k < modes.frequencies.size(); ++k) {
    if (std::abs(modes.frequencies(k) - wr) > window) continue;
    double w = 0.0;
    for (std::size_t i = 0; i < map.lattice_sites(); ++i) {
      const int row = map.site(i).n;
      if (row < opt.edge_rows || row >= cs.lattice.n1 - opt.edge_rows) w += modes.vectors(Eigen::Index(i), k) * modes.vectors(Eigen::Index(i), k);
    }
    if (w <= opt.edge_weight_threshold) continue;
    ++count;
    lo = std::min(lo, modes.frequencies(k));
    hi = std::max(hi, modes.frequencies(k));
  }
  if (cluster_size) *cluster_size = count;
  return count == 0 ? -1.0 : hi - lo;
}

FlatBandWidth disorder_flatband_width(const CircuitSpec& cs, const FlatBandOptions& opt) {
  cs.validate();
  FlatBandWidth out;
  out.sigma_rel = cs.sigma_rel;
  const std::size_t n = cs.lattice.lattice_sites();
  const Eigen::MatrixXd c = build_capacitance_matrix(cs);
  // realizations are independent (own seed); results are collected in index order
  std::vector<double> width(std::size_t(cs.realizations), -1.0);
  std::vector<int> sizes(std::size_t(cs.realizations), 0);
#ifdef EDGEQED_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int r = 0; r < cs.realizations; ++r) {
    const std::vector<double> xi = realization_deviates(cs.seed, r, n);
    const CircuitModes modes = normal_modes(c, site_inverse_inductance(cs, xi));
    width[std::size_t(r)] = edge_cluster_width(cs, modes, opt, &sizes[std::size_t(r)]);
  }
  for (int r = 0; r < cs.realizations; ++r) {
    out.cluster_sizes.push_back(sizes[std::size_t(r)]);
    if (width[std::size_t(r)] < 0.0) {
      ++out.failed;
      continue;
    }
    out.widths.push_back(width[std::size_t(r)]);
  }
  if (!out.widths.empty()) {
    const double m = std::accumulate(out.widths.begin(), out.widths.end(), 0.0) / double(out.widths.size());
    double v = 0.0;
    for (double w : out.widths) v += (w - m) * (w - m);
    out.mean = m;
    out.stddev = out.widths.size() > 1 ? std::sqrt(v / double(out.widths.size() - 1)) : 0.0;
  }
  return out;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("spearman needs two equal-length samples (n >= 2)");
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / double(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / double(ry.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace edgeqed
