// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "edgeqed/flatband.hpp"

namespace edgeqed {

void TimeSeries::add(const std::string& name, std::vector<double> column) {
  if (column.size() != times.size()) throw std::invalid_argument("channel " + name + " has wrong length");
  if (has(name)) throw std::invalid_argument("duplicate channel " + name);
  names.push_back(name);
  columns.push_back(std::move(column));
}

bool TimeSeries::has(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("no channel named " + name);
  return columns[std::size_t(it - names.begin())];
}

std::vector<double> uniform_times(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw ConfigError("time grid needs dt > 0 and t_end >= 0");
  const long steps = std::lround(std::floor(t_end / dt + 1e-9));
  std::vector<double> t(std::size_t(steps) + 1);
  for (long i = 0; i <= steps; ++i) t[std::size_t(i)] = double(i) * dt;
  return t;
}

WaveState excited_qubit_state(const SparseHermitian& h, std::size_t q) {
  WaveState s;
  s.amplitude.assign(h.dimension(), cplx{0.0, 0.0});
  s.amplitude[h.site_map().qubit_index(q)] = 1.0;
  return s;
}

std::vector<ModeField> orthonormal_cavity_modes(const LatticeSpec& spec, std::span<const int> positions,
                                                std::size_t extra_slots) {
  std::vector<ModeField> raw;
  for (int m : positions) {
    ModeField f = cavity_field(spec, m);
    f.resize(f.size() + extra_slots, cplx{0.0, 0.0});
    raw.push_back(std::move(f));
  }
  const Eigen::Index n = Eigen::Index(raw.size());
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = dot(raw[std::size_t(i)], raw[std::size_t(j)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0))
    throw DomainError("cavity fields are linearly dependent on this strip");
  const Eigen::MatrixXcd inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  std::vector<ModeField> out(raw.size(), ModeField(raw.empty() ? 0 : raw[0].size(), cplx{0.0, 0.0}));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx c = inv_sqrt(j, i);
      for (std::size_t s = 0; s < out[std::size_t(i)].size(); ++s) out[std::size_t(i)][s] += c * raw[std::size_t(j)][s];
    }
  return out;
}

TimeSeries evolve_full(const SparseHermitian& h, WaveState& state, std::span<const double> times,
                       std::span<const ModeField> cavity_modes, const PropagatorOptions& opt,
                       EvolutionStats* stats) {
  const std::size_t dim = h.dimension();
  if (state.amplitude.size() != dim) throw std::invalid_argument("initial state size does not match Hamiltonian");
  for (const auto& c : cavity_modes)
    if (c.size() != dim) throw std::invalid_argument("cavity mode size does not match Hamiltonian");
  const double n0 = norm(state.amplitude);
  if (std::abs(n0 - 1.0) > 1e-12) throw ConfigError("initial state must be normalized");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("sample times must increase");

  const SiteMap& map = h.site_map();
  const std::size_t nq = map.num_qubits();
  TimeSeries ts;
  ts.times.assign(times.begin(), times.end());
  std::vector<std::vector<double>> pq(nq), pc(cavity_modes.size());
  std::vector<double> pb;
  auto propagator = make_propagator(h, opt);
  double drift = 0.0;
  for (double t : times) {
    propagator->advance(state.amplitude, t - state.time);
    state.time = t;
    double total = 0.0;
    for (const auto& a : state.amplitude) total += std::norm(a);
    drift = std::max(drift, std::abs(std::sqrt(total) - 1.0));
    double rest = total;
    for (std::size_t q = 0; q < nq; ++q) {
      const double p = std::norm(state.amplitude[map.qubit_index(q)]);
      pq[q].push_back(p);
      rest -= p;
    }
    for (std::size_t c = 0; c < cavity_modes.size(); ++c) {
      const double p = std::norm(dot(cavity_modes[c], state.amplitude));
      pc[c].push_back(p);
      rest -= p;
    }
    pb.push_back(std::max(rest, 0.0));
  }
  for (std::size_t q = 0; q < nq; ++q) ts.add("p_q" + std::to_string(q + 1), std::move(pq[q]));
  for (std::size_t c = 0; c < pc.size(); ++c) ts.add("p_cavity_" + std::to_string(c + 1), std::move(pc[c]));
  ts.add("p_bulk", std::move(pb));
  ts.metadata["engine"] = to_string(opt.engine);
  std::ostringstream tol;
  tol << opt.tolerance;
  ts.metadata["tolerance"] = tol.str();
  if (stats) {
    stats->max_norm_drift = drift;
    stats->matvecs = propagator->matvecs();
  }
  return ts;
}

TimeSeries evolve_effective(const EffectiveModel& model, std::span<const cplx> initial,
                            std::span<const double> times, const EffectiveOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  const Eigen::Index nq = model.projector.orthonormalizer.rows();
  if (Eigen::Index(initial.size()) != 2 * nq) throw ConfigError("effective initial state must have 2 x qubits entries");
  if (model.gamma.rows() != nq || model.gamma.cols() != nq) throw ConfigError("decay matrix size mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("sample times must increase");

  // H = [[detuning - i gamma / 2, g M], [g M, 0]] on (qubits, cavity modes).
  Eigen::MatrixXcd hnh = Eigen::MatrixXcd::Zero(2 * nq, 2 * nq);
  for (Eigen::Index i = 0; i < nq; ++i) {
    hnh(i, i) += model.detuning;
    for (Eigen::Index j = 0; j < nq; ++j) {
      hnh(i, j) += cplx{0.0, -0.5 * model.gamma(i, j)};
      hnh(i, nq + j) = model.g * model.projector.orthonormalizer(i, j);
      hnh(nq + j, i) = model.g * model.projector.orthonormalizer(i, j);
    }
  }
  const Eigen::MatrixXcd gen = cplx{0.0, -1.0} * hnh;

  using State = std::vector<cplx>;
  State psi(initial.begin(), initial.end());
  auto rhs = [&](const State& x, State& dx, double) {
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), Eigen::Index(x.size()));
    Eigen::Map<Eigen::VectorXcd> dv(dx.data(), Eigen::Index(dx.size()));
    dv.noalias() = gen * xv;
  };

  TimeSeries ts;
  ts.times.assign(times.begin(), times.end());
  std::vector<std::vector<double>> cols(std::size_t(2 * nq));
  std::vector<double> bulk;
  double initial_norm2 = 0.0;
  for (const auto& a : psi) initial_norm2 += std::norm(a);
  double last_norm2 = initial_norm2;
  auto observe = [&](const State& x, double) {
    double n2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      cols[i].push_back(std::norm(x[i]));
      n2 += std::norm(x[i]);
    }
    if (n2 > last_norm2 + 1e-8) throw ConvergenceError("effective-model integrator fault: norm increased");
    last_norm2 = std::min(last_norm2, n2);
    // Jumps out of the single-excitation sector land in the ground state, which carries
    // no amplitude here; the lost weight is the bulk emission.
    bulk.push_back(std::max(initial_norm2 - n2, 0.0));
  };
  if (!times.empty()) {
    if (times.front() != 0.0) throw ConfigError("effective evolution starts at t = 0");
    const double dt0 = times.size() > 1 ? (times[1] - times[0]) * 0.1 : 1.0;
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, psi, times.begin(), times.end(), dt0, observe);
  }
  for (Eigen::Index i = 0; i < nq; ++i) ts.add("p_q" + std::to_string(i + 1), std::move(cols[std::size_t(i)]));
  for (Eigen::Index i = 0; i < nq; ++i)
    ts.add("p_cavity_" + std::to_string(i + 1), std::move(cols[std::size_t(nq + i)]));
  ts.add("p_bulk", std::move(bulk));
  return ts;
}

TimeSeries rabi_closed_form(double omega, double detuning, double gamma, std::span<const double> times) {
  TimeSeries ts;
  ts.times.assign(times.begin(), times.end());
  const double wr = std::sqrt(detuning * detuning + 4.0 * omega * omega);
  const double contrast = wr > 0.0 ? 4.0 * omega * omega / (wr * wr) : 0.0;
  std::vector<double> p;
  for (double t : times) {
    const double s = std::sin(0.5 * wr * t);
    p.push_back(std::exp(-0.5 * gamma * t) * (1.0 - contrast * s * s));
  }
  ts.add("p_e", std::move(p));
  return ts;
}

TimeSeries rabi_exact(double omega, double detuning, double gamma, std::span<const double> times) {
  TimeSeries ts;
  ts.times.assign(times.begin(), times.end());
  const cplx mu{0.5 * gamma, detuning};  // gamma/2 + i detuning
  const cplx s = std::sqrt(4.0 * omega * omega - mu * mu);
  std::vector<double> p;
  for (double t : times) {
    cplx amp;
    if (std::abs(s) * std::max(t, 1.0) < 1e-9)
      amp = std::exp(-0.5 * mu * t) * (1.0 - 0.5 * mu * t);
    else
      amp = std::exp(-0.5 * mu * t) * (std::cos(0.5 * s * t) - mu / s * std::sin(0.5 * s * t));
    p.push_back(std::norm(amp));
  }
  ts.add("p_e", std::move(p));
  return ts;
}

namespace {

struct RabiResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::span<const double> times;
  std::span<const double> pe;
  double detuning;

  int inputs() const { return 2; }
  int values() const { return int(times.size()); }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    const auto model = rabi_exact(x(0), detuning, x(1), times).channel("p_e");
    for (std::size_t i = 0; i < times.size(); ++i) r(Eigen::Index(i)) = model[i] - pe[i];
    return 0;
  }
};

}  // namespace

RabiFit fit_rabi(std::span<const double> times, std::span<const double> pe, double detuning, double omega0,
                 double gamma0) {
  if (times.size() != pe.size() || times.size() < 3) throw ConfigError("rabi fit needs matching samples (>= 3)");
  Eigen::NumericalDiff<RabiResidual> fn(RabiResidual{times, pe, detuning});
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<RabiResidual>> lm(fn);
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 4000;
  Eigen::VectorXd x(2);
  x << omega0, gamma0;
  const auto status = lm.minimize(x);
  RabiFit out;
  out.omega = std::abs(x(0));
  out.gamma = x(1);
  out.omega_rabi = std::sqrt(detuning * detuning + 4.0 * out.omega * out.omega);
  out.evaluations = int(lm.nfev);
  out.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall;
  Eigen::VectorXd r(Eigen::Index(times.size()));
  fn(x, r);
  out.rms = std::sqrt(r.squaredNorm() / double(r.size()));
  return out;
}

TimeSeries two_qubit_transfer(double g0, double g1, std::span<const double> times) {
  TimeSeries ts;
  ts.times.assign(times.begin(), times.end());
  std::vector<double> p1, p2;
  for (double t : times) {
    const double c0 = std::cos(g0 * t), c1 = std::cos(g1 * t);
    const double s0 = std::sin(g0 * t), s1 = std::sin(g1 * t);
    p1.push_back(c0 * c0 * c1 * c1);
    p2.push_back(s0 * s0 * s1 * s1);
  }
  ts.add("p_q1", std::move(p1));
  ts.add("p_q2", std::move(p2));
  return ts;
}

TransferPeak transfer_fidelity(const TimeSeries& series, const std::string& channel) {
  const auto& p = series.channel(channel);
  const auto& t = series.times;
  if (p.empty()) throw ConfigError("empty time series");
  const std::size_t i = std::size_t(std::max_element(p.begin(), p.end()) - p.begin());
  TransferPeak out{t[i], p[i], i == 0 || i + 1 == p.size()};
  if (out.at_boundary) return out;
  // Parabola through the three samples around the discrete maximum.
  const double x0 = t[i - 1], x1 = t[i], x2 = t[i + 1];
  const double y0 = p[i - 1], y1 = p[i], y2 = p[i + 1];
  const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  if (a < 0.0) {
    // Newton form y0 + d01 (x - x0) + a (x - x0)(x - x1); its vertex:
    const double xv = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * a), x0, x2);
    out.t_peak = xv;
    out.p_peak = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
  }
  return out;
}

const ChannelDeviation& DeviationReport::channel(const std::string& name) const {
  for (const auto& c : channels)
    if (c.name == name) return c;
  throw std::out_of_range("no deviation entry for " + name);
}

DeviationReport compare_models(const TimeSeries& full, const TimeSeries& effective,
                               const std::vector<std::string>& channels,
                               const std::map<std::string, std::string>& rename) {
  if (full.times.size() != effective.times.size()) throw ConfigError("time grids differ in length");
  for (std::size_t i = 0; i < full.times.size(); ++i)
    if (std::abs(full.times[i] - effective.times[i]) > 1e-9 * std::max(1.0, std::abs(full.times[i])))
      throw ConfigError("time grids differ");
  auto full_name = [&](const std::string& eff) {
    auto it = rename.find(eff);
    return it == rename.end() ? eff : it->second;
  };
  std::vector<std::string> list = channels;
  if (list.empty())
    for (const auto& n : effective.names)
      if (full.has(full_name(n))) list.push_back(n);
  if (list.empty()) throw ConfigError("channel mismatch: no common channels");
  DeviationReport rep;
  for (const auto& name : list) {
    if (!effective.has(name) || !full.has(full_name(name))) throw ConfigError("channel mismatch: " + name);
    const auto& a = full.channel(full_name(name));
    const auto& b = effective.channel(name);
    ChannelDeviation d{full_name(name), 0.0, 0.0};
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double e = a[i] - b[i];
      d.max_abs = std::max(d.max_abs, std::abs(e));
      s += e * e;
    }
    d.rms = a.empty() ? 0.0 : std::sqrt(s / double(a.size()));
    rep.channels.push_back(d);
  }
  return rep;
}

double echo_free_time(const LatticeSpec& spec, std::span<const int> positions) {
  const double v = 0.5 * (2.0 + spec.beta) * spec.j;
  double path = 2.0 * 1.5 * (spec.n1 - 1);
  if (spec.boundary_e2 == Boundary::periodic) {
    path = std::min(path, std::sqrt(3.0) * spec.n2);
  } else {
    for (int m : positions) path = std::min(path, 2.0 * std::sqrt(3.0) * std::min(m, spec.n2 - 1 - m));
  }
  return path / v;
}

}  // namespace edgeqed
