// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "edgeqed/circuit.hpp"
#include "edgeqed/dynamics.hpp"
#include "edgeqed/emitters.hpp"
#include "edgeqed/fit.hpp"
#include "edgeqed/flatband.hpp"
#include "edgeqed/spectra.hpp"

namespace edgeqed {

namespace {

using std::numbers::pi;

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

std::string beta_tag(double beta) {
  std::ostringstream os;
  os << beta;
  return os.str();
}

void require_qubits(const ScenarioConfig& cfg, std::size_t at_least, const std::string& who) {
  if (cfg.qubits.empty()) throw ConfigError("at least one qubit required");
  if (cfg.qubits.size() < at_least)
    throw ConfigError(who + " needs at least " + std::to_string(at_least) + " qubits");
  cfg.qubits.validate(cfg.lattice.n2);
}

PropagatorOptions propagator_options(const ScenarioConfig& cfg) {
  PropagatorOptions o;
  o.engine = cfg.run.engine;
  o.tolerance = cfg.run.tolerance;
  return o;
}

struct FullRun {
  TimeSeries series;
  EvolutionStats stats;
  double echo_time = 0.0;
  double t_window = 0.0;
};

// Exact dynamics from the first qubit excited, sampled up to the echo-free time.
FullRun full_model(const ScenarioConfig& cfg, const LatticeSpec& lattice, const QubitArrangement& qubits) {
  ScenarioConfig probe = cfg;
  probe.lattice = lattice;
  check_memory_cap(probe, qubits.size());
  FullRun out;
  const auto positions = qubits.positions();
  out.echo_time = echo_free_time(lattice, positions);
  out.t_window = std::min(cfg.run.t_end, out.echo_time);
  const auto times = uniform_times(out.t_window, cfg.run.dt);
  const auto h = attach_qubits(build_bath_hamiltonian(lattice), qubits);
  const auto cavities = orthonormal_cavity_modes(lattice, positions, qubits.size());
  WaveState psi = excited_qubit_state(h, 0);
  out.series = evolve_full(h, psi, times, cavities, propagator_options(cfg), &out.stats);
  return out;
}

TimeSeries effective_from_first_qubit(const EffectiveModel& em, std::span<const double> times) {
  std::vector<cplx> init(2 * em.projector.positions.size(), cplx{0.0, 0.0});
  init[0] = 1.0;
  return evolve_effective(em, init, times);
}

Json peak_json(const TransferPeak& p, double g) {
  return Json{{"p_peak", p.p_peak}, {"t_peak", p.t_peak}, {"gt_peak", g * p.t_peak}, {"at_window_edge", p.at_boundary}};
}

Json run_json(const FullRun& r) {
  return Json{{"echo_free_time", r.echo_time},
              {"t_window", r.t_window},
              {"max_norm_drift", r.stats.max_norm_drift},
              {"matvecs", r.stats.matvecs}};
}

// ---------------------------------------------------------------------------------------

ScenarioResult rabi(const ScenarioConfig& cfg) {
  require_qubits(cfg, 1, "rabi_fig2c");
  if (cfg.qubits.size() != 1) throw ConfigError("rabi_fig2c takes exactly one qubit");
  const Emitter q = cfg.qubits.qubits.front();
  const FullRun run = full_model(cfg, cfg.lattice, cfg.qubits);
  const auto& t = run.series.times;
  const EffectiveModel em = build_effective_model(cfg.qubits, cfg.lattice);
  const double gamma = em.gamma(0, 0);
  const auto exact = rabi_exact(em.omega, q.detuning, gamma, t);
  const auto closed = rabi_closed_form(em.omega, q.detuning, gamma, t);
  const auto eff = effective_from_first_qubit(em, t);
  const auto& pe = run.series.channel("p_q1");
  const auto dev = compare_models(run.series, exact, {"p_e"}, {{"p_e", "p_q1"}});
  const RabiFit fit = fit_rabi(t, pe, q.detuning, em.omega, gamma);

  ScenarioResult r;
  Table tab = table_from_series("rabi", run.series);
  tab.header.insert(tab.header.begin(), {{"g", format_number(q.g)}, {"detuning", format_number(q.detuning)},
                                         {"beta", format_number(cfg.lattice.beta)}});
  tab.add("p_e_exact", exact.channel("p_e"));
  tab.add("p_e_closed_form", closed.channel("p_e"));
  tab.add("p_e_effective", eff.channel("p_q1"));
  r.tables.push_back(std::move(tab));
  r.summary = Json{{"omega", em.omega},
                   {"omega_rabi", em.omega_rabi},
                   {"gamma", gamma},
                   {"rms_vs_exact", dev.channels[0].rms},
                   {"max_abs_vs_exact", dev.channels[0].max_abs},
                   {"fit", {{"omega", fit.omega},
                            {"omega_rabi", fit.omega_rabi},
                            {"gamma", fit.gamma},
                            {"rms", fit.rms},
                            {"converged", fit.converged}}},
                   {"run", run_json(run)}};
  return r;
}

ScenarioResult transfer(const ScenarioConfig& cfg) {
  require_qubits(cfg, 2, "transfer_fig2de");
  const FullRun run = full_model(cfg, cfg.lattice, cfg.qubits);
  const auto& t = run.series.times;
  const EffectiveModel em = build_effective_model(cfg.qubits, cfg.lattice);
  const auto eff = effective_from_first_qubit(em, t);
  const double g = cfg.qubits.shared_coupling();
  const double g0 = g * em.projector.orthonormalizer(0, 0), g1 = g * em.projector.orthonormalizer(0, 1);
  const auto beat = two_qubit_transfer(g0, g1, t);

  ScenarioResult r;
  Table tab = table_from_series("transfer", run.series);
  tab.add("p_q1_effective", eff.channel("p_q1"));
  tab.add("p_q2_effective", eff.channel("p_q2"));
  tab.add("p_q2_beating", beat.channel("p_q2"));
  r.tables.push_back(std::move(tab));
  const auto dev = compare_models(run.series, eff, {"p_q1", "p_q2"});
  double beat_dev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    beat_dev = std::max(beat_dev, std::abs(beat.channel("p_q2")[i] - eff.channel("p_q2")[i]));
  r.summary = Json{{"g0", g0},
                   {"g1", g1},
                   {"full_peak", peak_json(transfer_fidelity(run.series, "p_q2"), g)},
                   {"effective_peak", peak_json(transfer_fidelity(eff, "p_q2"), g)},
                   {"rms_full_vs_effective", {{"p_q1", dev.channel("p_q1").rms}, {"p_q2", dev.channel("p_q2").rms}}},
                   {"max_abs_beating_vs_effective", beat_dev},
                   {"run", run_json(run)}};
  return r;
}

ScenarioResult anisotropy(const ScenarioConfig& cfg) {
  require_qubits(cfg, 2, "anisotropy_fig3df");
  std::vector<double> betas = cfg.run.beta_sweep;
  if (betas.empty()) betas.push_back(cfg.lattice.beta);
  const double g = cfg.qubits.shared_coupling();
  ScenarioResult r;
  Json per = Json::array();
  for (double beta : betas) {
    LatticeSpec lat = cfg.lattice;
    lat.beta = beta;
    const FullRun run = full_model(cfg, lat, cfg.qubits);
    Table tab = table_from_series("anisotropy_beta" + beta_tag(beta), run.series);
    tab.header.insert(tab.header.begin(), {"beta", format_number(beta)});
    per.push_back(Json{{"beta", beta},
                       {"full_peak", peak_json(transfer_fidelity(run.series, "p_q2"), g)},
                       {"run", run_json(run)}});
    r.tables.push_back(std::move(tab));
  }
  r.summary = Json{{"separation", std::abs(cfg.qubits.qubits[1].m - cfg.qubits.qubits[0].m)}, {"betas", per}};
  return r;
}

ScenarioResult cavity_profile(const ScenarioConfig& cfg) {
  const double beta = cfg.lattice.beta;
  const int e = cfg.run.profile_extent;
  Table tab;
  tab.name = "cavity_profile";
  tab.header = {{"beta", format_number(beta)}, {"c", "amplitude on A(n,m) of the cavity mode centred on m=0"}};
  std::vector<double> ns, ms, cs;
  for (int n = 0; n <= e; ++n)
    for (int m = -e; m <= e; ++m) {
      ns.push_back(n);
      ms.push_back(m);
      cs.push_back(n == 0 ? cavity_edge_amplitude(m, beta) : cavity_amplitude(n, m, beta));
    }
  tab.add("n", ns);
  tab.add("m", ms);
  tab.add("c", cs);

  ScenarioResult r;
  Json summary{{"beta", beta}, {"cavity_volume", cavity_volume(beta)}, {"c00", cavity_edge_amplitude(0, beta)}};
  const int lo = std::min(10, e - 1);
  std::vector<double> x, edge, bulk;
  for (int k = lo; k <= e; ++k) {
    x.push_back(k);
    edge.push_back(cavity_edge_amplitude(k, beta));
    bulk.push_back(cavity_amplitude(k, 0, beta));
  }
  if (x.size() >= 3) {
    try {
      const LineFit fe = power_law_fit(x, edge, 1e-4 * std::abs(cavity_edge_amplitude(0, beta)));
      summary["edge_slope"] = Json{{"slope", fe.slope}, {"points", fe.points}, {"range", {lo, e}}};
    } catch (const ConvergenceError& err) {
      summary["edge_slope"] = Json{{"error", err.what()}};
    }
    try {
      const LineFit fb = power_law_envelope_fit(x, bulk);
      summary["bulk_slope"] = Json{{"slope", fb.slope}, {"points", fb.points}, {"range", {lo, e}}};
    } catch (const ConvergenceError& err) {
      summary["bulk_slope"] = Json{{"error", err.what()}};
    }
  }
  r.summary = summary;
  r.tables.push_back(std::move(tab));
  return r;
}

ScenarioResult effective_params(const ScenarioConfig& cfg) {
  if (cfg.qubits.empty()) throw ConfigError("at least one qubit required");
  const EffectiveModel em = build_effective_model(cfg.qubits, cfg.lattice);
  ScenarioResult r;
  r.summary = Json{{"g", em.g},
                   {"detuning", em.detuning},
                   {"omega", em.omega},
                   {"omega_rabi", em.omega_rabi},
                   {"positions", em.projector.positions},
                   {"gamma", matrix_json(em.gamma)},
                   {"projector", matrix_json(em.projector.projector)},
                   {"orthonormalizer", matrix_json(em.projector.orthonormalizer)},
                   {"dispersive", em.dispersive ? matrix_json(*em.dispersive) : Json()},
                   {"warnings", em.warnings}};
  return r;
}

ScenarioResult circuit_report(const ScenarioConfig& cfg) {
  const CircuitSpec& cs = cfg.circuit;
  cs.validate();
  const double two_pi = 2.0 * pi;
  ScenarioResult r;
  Json summary{{"resonator_hz", cs.resonator_frequency() / two_pi},
               {"coupling_ratio", cs.coupling_ratio()},
               {"nominal_hopping_hz", cs.nominal_hopping() / two_pi}};

  CircuitSpec clean = cs;
  clean.sigma_rel = 0.0;
  const CircuitModes modes = circuit_modes(clean);
  {
    Table t;
    t.name = "circuit_modes";
    t.header = {{"frequency_unit", "Hz"}};
    std::vector<double> idx, f;
    for (Eigen::Index i = 0; i < modes.frequencies.size(); ++i) {
      idx.push_back(double(i));
      f.push_back(modes.frequencies(i) / two_pi);
    }
    t.add("index", idx);
    t.add("frequency", f);
    r.tables.push_back(std::move(t));
  }
  if (cs.lattice.n1 >= 6) {
    const HoppingFit fit = extract_hoppings(clean);
    const Eigen::VectorXd tb = tight_binding_frequencies(clean, fit);
    summary["hoppings"] = Json{{"j1_hz", fit.j1 / two_pi},
                               {"j1_across_hz", fit.j1_across / two_pi},
                               {"j2_over_j1", fit.j2 / fit.j1},
                               {"j3_over_j1", fit.j3 / fit.j1},
                               {"j1_over_nominal", fit.j1 / cs.nominal_hopping()},
                               {"onsite_shift_over_j", fit.onsite_shift / cs.nominal_hopping()},
                               {"residual", fit.residual},
                               {"tight_binding_max_dev_over_j",
                                (modes.frequencies - tb).cwiseAbs().maxCoeff() / cs.nominal_hopping()}};
    // Long-range trend against Cc / C_sigma at the same resonator frequency and C_sigma.
    Table trend;
    trend.name = "circuit_trend";
    std::vector<double> k, r1, r2, r3;
    for (double kappa : {0.005, 0.01, 0.02, 0.05, 0.1}) {
      const CircuitSpec c = circuit_for_ratio(kappa, cs.resonator_frequency() / two_pi, cs.total_capacitance(), cs.lattice);
      const HoppingFit f = extract_hoppings(c);
      k.push_back(kappa);
      r1.push_back(f.j1 / c.nominal_hopping());
      r2.push_back(f.j2 / f.j1);
      r3.push_back(f.j3 / f.j1);
    }
    trend.add("coupling_ratio", k);
    trend.add("j1_over_nominal", r1);
    trend.add("j2_over_j1", r2);
    trend.add("j3_over_j1", r3);
    r.tables.push_back(std::move(trend));
  }
  int size = 0;
  summary["clean_edge_cluster"] =
      Json{{"width_hz", edge_cluster_width(clean, modes, FlatBandOptions{}, &size) / two_pi}, {"modes", size}};

  std::vector<double> sigmas = cfg.run.sigma_sweep;
  if (sigmas.empty() && cs.sigma_rel > 0.0) sigmas.push_back(cs.sigma_rel);
  if (!sigmas.empty()) {
    Table dis;
    dis.name = "circuit_disorder";
    dis.header = {{"seed", std::to_string(cs.seed)}, {"realizations", std::to_string(cs.realizations)},
                  {"width_unit", "Hz"}};
    std::vector<double> s, mean, sd, failed;
    for (double sigma : sigmas) {
      CircuitSpec c = cs;
      c.sigma_rel = sigma;
      const FlatBandWidth w = disorder_flatband_width(c);
      s.push_back(sigma);
      mean.push_back(w.mean / two_pi);
      sd.push_back(w.stddev / two_pi);
      failed.push_back(w.failed);
    }
    dis.add("sigma_rel", s);
    dis.add("mean_width", mean);
    dis.add("std_width", sd);
    dis.add("failed", failed);
    summary["disorder_spearman"] = s.size() >= 2 ? Json(spearman(s, mean)) : Json();
    r.tables.push_back(std::move(dis));
  }
  r.summary = summary;
  return r;
}

ScenarioResult spectra(const ScenarioConfig& cfg) {
  const LatticeSpec& s = cfg.lattice;
  const auto ev = dense_spectrum(build_bath_hamiltonian(s));
  double min_abs = 1e300;
  int at_delta = 0, zero_cluster = 0;
  for (double e : ev) {
    min_abs = std::min(min_abs, std::abs(e));
    if (std::abs(e - s.delta) < 1e-6) ++at_delta;
    if (std::abs(e - s.delta) < 1e-2) ++zero_cluster;
  }
  const auto support = flat_band_support(s.beta);
  const DiracPoint d = locate_dirac_point(s, 721);
  ScenarioResult r;
  r.summary = Json{{"dimension", ev.size()},
                   {"min_abs_energy", min_abs},
                   {"gap", 2.0 * min_abs},
                   {"states_at_delta_1e-6", at_delta},
                   {"states_near_delta_1e-2", zero_cluster},
                   {"flat_band_expected_per_edge", s.n2 * support.fraction()},
                   {"dirac_point", {{"k", d.k}, {"q", d.q}, {"omega", d.omega}}},
                   {"dirac_k_expected", s.beta < 2.0 ? Json(2.0 * std::acos(0.5 * s.beta)) : Json()}};
  Table t;
  t.name = "spectrum";
  t.header = {{"n1", std::to_string(s.n1)}, {"n2", std::to_string(s.n2)}, {"delta", format_number(s.delta)},
              {"beta", format_number(s.beta)}, {"energy_unit", "J"}};
  std::vector<double> idx(ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) idx[i] = double(i);
  t.add("index", idx);
  t.add("energy", ev);
  r.tables.push_back(std::move(t));

  Table bands;
  bands.name = "bands";
  bands.header = {{"beta", format_number(s.beta)}, {"delta", format_number(s.delta)}, {"energy_unit", "J"}};
  const int nk = 61;
  std::vector<double> ks, qs, up, down;
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) {
      const double k = -pi + 2.0 * pi * a / (nk - 1), q = -pi + 2.0 * pi * b / (nk - 1);
      const BandPair bp = bulk_dispersion(k, q, s);
      ks.push_back(k);
      qs.push_back(q);
      up.push_back(bp.omega_plus);
      down.push_back(bp.omega_minus);
    }
  bands.add("k", ks);
  bands.add("q", qs);
  bands.add("omega_plus", up);
  bands.add("omega_minus", down);
  r.tables.push_back(std::move(bands));

  Table edge;
  edge.name = "edge_modes";
  edge.header = {{"n1", std::to_string(s.n1)}, {"n2", std::to_string(s.n2)}, {"beta", format_number(s.beta)}};
  const EdgeModeSet set = edge_modes_on_grid(s, default_max_penetration(s), false);
  std::vector<double> ek, el, en, ef;
  for (double k : set.momenta) {
    const EdgeMode mode = edge_mode(k, s);
    ek.push_back(k);
    el.push_back(mode.penetration_length);
    en.push_back(mode.normalization);
    ef.push_back(mode.frequency);
  }
  edge.add("k", ek);
  edge.add("lambda_k", el);
  edge.add("N_k", en);
  edge.add("frequency", ef);
  r.tables.push_back(std::move(edge));
  r.summary["edge_modes_built"] = set.momenta.size();
  r.summary["edge_modes_skipped"] = set.skipped;
  return r;
}

std::vector<ScenarioInfo> make_registry() {
  const Json heavy_run{{"t_end", 800.0}, {"dt", 1.0}};
  return {
      {"rabi_fig2c", "single emitter: exact dynamics vs damped vacuum Rabi oscillation",
       Json{{"lattice", {{"n1", 300}, {"n2", 300}}},
            {"qubits", Json::array({{{"m", 0}, {"g", 0.05}, {"detuning", 0.0}}})},
            {"run", heavy_run}},
       rabi},
      {"transfer_fig2de", "two emitters two cells apart: excitation transfer through the cavity modes",
       Json{{"lattice", {{"n1", 300}, {"n2", 300}}},
            {"qubits", Json::array({{{"m", 0}, {"g", 0.05}, {"detuning", 0.0}}, {{"m", 2}, {"g", 0.05}, {"detuning", 0.0}}})},
            {"run", heavy_run}},
       transfer},
      {"anisotropy_fig3df", "transfer over six cells for several inter-row hoppings",
       Json{{"lattice", {{"n1", 300}, {"n2", 600}}},
            {"qubits", Json::array({{{"m", 0}, {"g", 0.05}, {"detuning", 0.0}}, {{"m", 6}, {"g", 0.05}, {"detuning", 0.0}}})},
            {"run", {{"t_end", 800.0}, {"dt", 1.0}, {"beta_sweep", {0.5, 1.5}}}}},
       anisotropy},
      {"cavity_profile_fig2ab", "cavity-mode amplitudes c(n,m) and their power-law tails",
       Json{{"run", {{"profile_extent", 100}}}}, cavity_profile},
      {"effective_params", "cavity-QED parameters (Omega, gamma, P, M, K) for the configured emitters",
       Json{{"lattice", {{"n1", 300}, {"n2", 300}}}, {"qubits", Json::array({{{"m", 0}, {"g", 0.05}, {"detuning", 0.0}}})}},
       effective_params},
      {"circuit_report", "LC-lattice hoppings, long-range trend and disorder broadening of the edge cluster",
       Json{{"circuit", {{"lattice", {{"n1", 20}, {"n2", 10}}}}},
            {"run", {{"sigma_sweep", {0.0005, 0.001, 0.002, 0.005}}}}},
       circuit_report},
      {"spectra", "dense spectrum of the strip: gap, flat-band count and Dirac point",
       Json{{"lattice", {{"n1", 30}, {"n2", 30}, {"delta", 0.3}}}}, spectra},
  };
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> reg = make_registry();
  return reg;
}

const ScenarioInfo& find_scenario(const std::string& name) {
  for (const auto& s : scenario_registry())
    if (s.name == name) return s;
  std::string list;
  for (const auto& s : scenario_registry()) list += (list.empty() ? "" : ", ") + s.name;
  throw ConfigError("unknown scenario \"" + name + "\" (one of " + list + ")");
}

void check_memory_cap(const ScenarioConfig& cfg, std::size_t qubits) {
  const double mb = estimate_full_model_mb(cfg.lattice, qubits, cfg.run.engine);
  if (mb <= cfg.run.memory_cap_mb) return;
  const int side = suggest_lattice_side(cfg.run.memory_cap_mb, qubits, cfg.run.engine);
  std::ostringstream os;
  os << "lattice " << cfg.lattice.n1 << "x" << cfg.lattice.n2 << " needs about " << std::lround(mb)
     << " MiB, above run.memory_cap_mb=" << cfg.run.memory_cap_mb << "; try n1 = n2 = " << side << " or raise the cap";
  throw ConfigError(os.str());
}

ScenarioResult run_projector(const ScenarioConfig& cfg) {
  if (cfg.qubits.empty()) throw ConfigError("at least one qubit required");
  cfg.qubits.validate(cfg.lattice.n2);
  const auto positions = cfg.qubits.positions();
  const ProjectorBlock b = orthonormalize(positions, cfg.lattice.beta);
  ScenarioResult r;
  r.summary = Json{{"beta", cfg.lattice.beta},
                   {"positions", b.positions},
                   {"P", matrix_json(b.projector)},
                   {"M", matrix_json(b.orthonormalizer)}};
  return r;
}

ScenarioResult run_evolve(const ScenarioConfig& cfg) {
  require_qubits(cfg, 1, "evolve");
  const FullRun run = full_model(cfg, cfg.lattice, cfg.qubits);
  const auto& t = run.series.times;
  const EffectiveModel em = build_effective_model(cfg.qubits, cfg.lattice);
  const auto eff = effective_from_first_qubit(em, t);
  ScenarioResult r;
  Table tab = table_from_series("evolve", run.series);
  Json peaks = Json::object(), dev = Json::object();
  const auto report = compare_models(run.series, eff);
  for (const auto& c : report.channels) dev[c.name] = Json{{"rms", c.rms}, {"max_abs", c.max_abs}};
  for (std::size_t q = 0; q < cfg.qubits.size(); ++q) {
    const std::string name = "p_q" + std::to_string(q + 1);
    peaks[name] = peak_json(transfer_fidelity(run.series, name), cfg.qubits.shared_coupling());
  }
  for (std::size_t i = 0; i < eff.names.size(); ++i) tab.add(eff.names[i] + "_effective", eff.columns[i]);
  r.tables.push_back(std::move(tab));
  r.summary = Json{{"omega", em.omega},
                   {"omega_rabi", em.omega_rabi},
                   {"gamma", matrix_json(em.gamma)},
                   {"peaks", peaks},
                   {"full_vs_effective", dev},
                   {"run", run_json(run)}};
  return r;
}

}  // namespace edgeqed
