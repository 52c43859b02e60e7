// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "edgeqed/emitters.hpp"
#include "edgeqed/lattice.hpp"
#include "edgeqed/propagators.hpp"

namespace edgeqed {

// Named observables sampled on a shared time grid.
struct TimeSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::map<std::string, std::string> metadata;

  void add(const std::string& name, std::vector<double> column);
  bool has(const std::string& name) const;
  const std::vector<double>& channel(const std::string& name) const;
};

// 0, dt, 2 dt, ... up to and including t_end (within rounding).
std::vector<double> uniform_times(double t_end, double dt);

struct WaveState {
  ModeField amplitude;
  double time = 0.0;
};

// Single excitation on qubit slot q, field in vacuum, global phase 0.
WaveState excited_qubit_state(const SparseHermitian& h, std::size_t q);

// Orthonormal cavity modes for the given edge positions: the cavity fields are placed on
// the strip and mixed with the inverse square root of their Gram matrix.
std::vector<ModeField> orthonormal_cavity_modes(const LatticeSpec& spec, std::span<const int> positions,
                                                std::size_t extra_slots = 0);

struct EvolutionStats {
  double max_norm_drift = 0.0;
  std::size_t matvecs = 0;
};

// Exact single-excitation dynamics. Channels: p_q<i> per qubit slot, p_cavity_<i> per
// supplied (orthonormal) cavity mode, and p_bulk for the remaining lattice weight.
TimeSeries evolve_full(const SparseHermitian& h, WaveState& state, std::span<const double> times,
                       std::span<const ModeField> cavity_modes, const PropagatorOptions& opt,
                       EvolutionStats* stats = nullptr);

struct EffectiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

// Non-Hermitian evolution in the sector {qubits, orthonormal cavity modes}. `initial`
// lists qubit amplitudes first, then cavity-mode amplitudes. Channels: p_q<i>,
// p_cavity_<i>, p_bulk (weight emitted into the bulk, 1 - norm^2).
TimeSeries evolve_effective(const EffectiveModel& model, std::span<const cplx> initial,
                            std::span<const double> times, const EffectiveOptions& opt = {});

// exp(-gamma t / 2) [1 - (4 Omega^2 / Omega_R^2) sin^2(Omega_R t / 2)], channel p_e.
TimeSeries rabi_closed_form(double omega, double detuning, double gamma, std::span<const double> times);

// Exact excited population of the damped two-level Jaynes-Cummings problem, channel p_e.
TimeSeries rabi_exact(double omega, double detuning, double gamma, std::span<const double> times);

struct RabiFit {
  double omega = 0.0;
  double gamma = 0.0;
  double omega_rabi = 0.0;  // sqrt(detuning^2 + 4 omega^2) at the fitted omega
  double rms = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Levenberg-Marquardt fit of rabi_exact(omega, detuning, gamma) to sampled p_e with the
// detuning held fixed; starts from (omega0, gamma0).
RabiFit fit_rabi(std::span<const double> times, std::span<const double> pe, double detuning, double omega0,
                 double gamma0);

// Resonant lossless exchange between two emitters via two overlapping cavity modes.
// Channels p_q1 = cos^2(g0 t) cos^2(g1 t), p_q2 = sin^2(g0 t) sin^2(g1 t).
TimeSeries two_qubit_transfer(double g0, double g1, std::span<const double> times);

struct TransferPeak {
  double t_peak = 0.0;
  double p_peak = 0.0;
  bool at_boundary = false;
};

TransferPeak transfer_fidelity(const TimeSeries& series, const std::string& channel);

struct ChannelDeviation {
  std::string name;
  double max_abs = 0.0;
  double rms = 0.0;
};

struct DeviationReport {
  std::vector<ChannelDeviation> channels;
  const ChannelDeviation& channel(const std::string& name) const;
};

// Compares the listed channels (all common channels if empty) on a common time grid.
// `rename` maps channel names of `effective` onto names in `full` when they differ.
DeviationReport compare_models(const TimeSeries& full, const TimeSeries& effective,
                               const std::vector<std::string>& channels = {},
                               const std::map<std::string, std::string>& rename = {});

// Time before a wavefront leaving the edge emitters returns to them: the shortest return
// path (far edge and back, around the periodic circumference, or to an open side and
// back) divided by a group-velocity bound (2 + beta) J / 2 in units of the bond length
// (3J/2 at beta = 1, the Dirac velocity).
double echo_free_time(const LatticeSpec& spec, std::span<const int> positions);

}  // namespace edgeqed
