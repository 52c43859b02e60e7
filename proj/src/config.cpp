// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace edgeqed {

namespace {

const std::vector<std::string> kScenarioNames{"rabi_fig2c",          "transfer_fig2de", "anisotropy_fig3df",
                                              "cavity_profile_fig2ab", "effective_params", "circuit_report",
                                              "spectra"};

// Key reader that records problems instead of throwing.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& diag) : diag_(diag) {}

  bool object(const Json& j, const std::string& path) {
    if (j.is_object()) return true;
    diag_.push_back(path + ": expected an object");
    return false;
  }

  void known(const Json& obj, const std::string& path, const std::set<std::string>& keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!keys.count(it.key())) diag_.push_back(prefix(path) + it.key() + ": unknown key");
  }

  void number(const Json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj[key];
    if (!v.is_number()) {
      diag_.push_back(prefix(path) + key + ": expected a number");
      return;
    }
    out = v.get<double>();
  }

  template <class Int>
  void integer(const Json& obj, const std::string& path, const char* key, Int& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj[key];
    if (!v.is_number_integer()) {
      diag_.push_back(prefix(path) + key + ": expected an integer");
      return;
    }
    if (std::is_unsigned_v<Int> && v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
      diag_.push_back(prefix(path) + key + ": must be >= 0");
      return;
    }
    out = v.get<Int>();
  }

  void string(const Json& obj, const std::string& path, const char* key, std::string& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj[key];
    if (!v.is_string()) {
      diag_.push_back(prefix(path) + key + ": expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  void numbers(const Json& obj, const std::string& path, const char* key, std::vector<double>& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj[key];
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); })) {
      diag_.push_back(prefix(path) + key + ": expected an array of numbers");
      return;
    }
    out = v.get<std::vector<double>>();
  }

  void add(std::string s) { diag_.push_back(std::move(s)); }

 private:
  static std::string prefix(const std::string& path) { return path.empty() ? "" : path + "."; }
  std::vector<std::string>& diag_;
};

void read_lattice(Reader& r, const Json& j, const std::string& path, LatticeSpec& spec) {
  if (!r.object(j, path)) return;
  r.known(j, path, {"n1", "n2", "delta", "beta", "j", "boundary"});
  r.integer(j, path, "n1", spec.n1);
  r.integer(j, path, "n2", spec.n2);
  r.number(j, path, "delta", spec.delta);
  r.number(j, path, "beta", spec.beta);
  r.number(j, path, "j", spec.j);
  std::string b = to_string(spec.boundary_e2);
  r.string(j, path, "boundary", b);
  try {
    spec.boundary_e2 = boundary_from_string(b);
  } catch (const ConfigError& e) {
    r.add(path + ".boundary: " + e.what());
  }
}

Json lattice_json(const LatticeSpec& s) {
  return Json{{"n1", s.n1}, {"n2", s.n2}, {"delta", s.delta}, {"beta", s.beta}, {"j", s.j},
              {"boundary", to_string(s.boundary_e2)}};
}

// Renames the leading "lattice." of a violation to the section it came from.
std::string relabel(const std::string& msg, const std::string& section) {
  const std::string head = "lattice.";
  if (msg.rfind(head, 0) == 0) return section + "." + msg.substr(head.size());
  return msg;
}

}  // namespace

const Json& default_config_json() {
  static const Json doc = [] {
    ScenarioConfig c;
    return to_json(c);
  }();
  return doc;
}

ScenarioConfig config_from_json(const Json& doc, std::vector<std::string>& diagnostics) {
  Reader r(diagnostics);
  ScenarioConfig cfg;
  if (!r.object(doc, "config")) return cfg;
  r.known(doc, "", {"scenario", "lattice", "qubits", "run", "circuit"});

  r.string(doc, "", "scenario", cfg.scenario);
  if (std::find(kScenarioNames.begin(), kScenarioNames.end(), cfg.scenario) == kScenarioNames.end()) {
    std::string list;
    for (const auto& n : kScenarioNames) list += (list.empty() ? "" : ", ") + n;
    r.add("scenario: unknown scenario \"" + cfg.scenario + "\" (one of " + list + ")");
  }

  if (doc.contains("lattice")) read_lattice(r, doc["lattice"], "lattice", cfg.lattice);
  for (const auto& v : cfg.lattice.violations()) r.add(v);

  if (doc.contains("qubits")) {
    const Json& q = doc["qubits"];
    if (!q.is_array()) {
      r.add("qubits: expected an array");
    } else {
      for (std::size_t i = 0; i < q.size(); ++i) {
        const std::string path = "qubits[" + std::to_string(i) + "]";
        Emitter e;
        if (!r.object(q[i], path)) continue;
        r.known(q[i], path, {"m", "g", "detuning"});
        r.integer(q[i], path, "m", e.m);
        r.number(q[i], path, "g", e.g);
        r.number(q[i], path, "detuning", e.detuning);
        cfg.qubits.qubits.push_back(e);
      }
      if (cfg.lattice.n2 >= 1)
        for (const auto& v : cfg.qubits.violations(cfg.lattice.n2)) r.add(v);
    }
  }

  if (doc.contains("run")) {
    const Json& j = doc["run"];
    if (r.object(j, "run")) {
      r.known(j, "run",
              {"engine", "t_end", "dt", "tolerance", "format", "out_dir", "memory_cap_mb", "profile_extent",
               "beta_sweep", "sigma_sweep"});
      std::string engine = to_string(cfg.run.engine);
      r.string(j, "run", "engine", engine);
      try {
        cfg.run.engine = engine_from_string(engine);
      } catch (const ConfigError& e) {
        r.add(std::string("run.engine: ") + e.what());
      }
      r.number(j, "run", "t_end", cfg.run.t_end);
      r.number(j, "run", "dt", cfg.run.dt);
      r.number(j, "run", "tolerance", cfg.run.tolerance);
      r.string(j, "run", "format", cfg.run.format);
      r.string(j, "run", "out_dir", cfg.run.out_dir);
      r.number(j, "run", "memory_cap_mb", cfg.run.memory_cap_mb);
      r.integer(j, "run", "profile_extent", cfg.run.profile_extent);
      r.numbers(j, "run", "beta_sweep", cfg.run.beta_sweep);
      r.numbers(j, "run", "sigma_sweep", cfg.run.sigma_sweep);
    }
  }
  const RunSettings& run = cfg.run;
  if (!(run.t_end >= 0.0) || !std::isfinite(run.t_end)) r.add("run.t_end must be >= 0");
  if (!(run.dt > 0.0) || !std::isfinite(run.dt)) r.add("run.dt must be > 0");
  if (!(run.tolerance > 0.0 && run.tolerance < 1.0)) r.add("run.tolerance must lie in (0, 1)");
  if (run.format != "csv" && run.format != "json") r.add("run.format must be \"csv\" or \"json\"");
  if (run.out_dir.empty()) r.add("run.out_dir must not be empty");
  if (!(run.memory_cap_mb > 0.0)) r.add("run.memory_cap_mb must be > 0");
  if (run.profile_extent < 1) r.add("run.profile_extent must be >= 1");
  for (double b : run.beta_sweep)
    if (!(b > 0.0)) r.add("run.beta_sweep entries must be > 0");
  for (double s : run.sigma_sweep)
    if (!(s >= 0.0)) r.add("run.sigma_sweep entries must be >= 0");

  if (doc.contains("circuit")) {
    const Json& j = doc["circuit"];
    if (r.object(j, "circuit")) {
      r.known(j, "circuit", {"Lg", "Cg", "Cc", "Cp", "sigma_rel", "seed", "realizations", "lattice"});
      r.number(j, "circuit", "Lg", cfg.circuit.inductance);
      r.number(j, "circuit", "Cg", cfg.circuit.ground_capacitance);
      r.number(j, "circuit", "Cc", cfg.circuit.coupling_capacitance);
      r.number(j, "circuit", "Cp", cfg.circuit.parasitic_capacitance);
      r.number(j, "circuit", "sigma_rel", cfg.circuit.sigma_rel);
      r.integer(j, "circuit", "seed", cfg.circuit.seed);
      r.integer(j, "circuit", "realizations", cfg.circuit.realizations);
      if (j.contains("lattice")) read_lattice(r, j["lattice"], "circuit.lattice", cfg.circuit.lattice);
    }
  }
  for (const auto& v : cfg.circuit.violations()) r.add(relabel(v, "circuit.lattice"));
  if (cfg.circuit.lattice.lattice_sites() > 10000) r.add("circuit.lattice: more than 10000 sites (dense mode solve)");
  return cfg;
}

Json parse_config_text(const std::string& text, std::vector<std::string>& diagnostics) {
  try {
    return Json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    diagnostics.push_back(e.what());
    return Json::object();
  }
}

Json read_config_file(const std::string& path, std::vector<std::string>& diagnostics) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) {
    diagnostics.push_back("cannot open config file " + path);
    return Json::object();
  }
  std::stringstream ss;
  ss << in.rdbuf();
  std::vector<std::string> local;
  Json doc = parse_config_text(ss.str(), local);
  for (auto& d : local) diagnostics.push_back(path + ": " + d);
  return doc;
}

Json to_json(const ScenarioConfig& cfg) {
  Json qubits = Json::array();
  for (const auto& q : cfg.qubits.qubits) qubits.push_back(Json{{"m", q.m}, {"g", q.g}, {"detuning", q.detuning}});
  const RunSettings& r = cfg.run;
  const CircuitSpec& c = cfg.circuit;
  return Json{{"scenario", cfg.scenario},
              {"lattice", lattice_json(cfg.lattice)},
              {"qubits", qubits},
              {"run",
               {{"engine", to_string(r.engine)},
                {"t_end", r.t_end},
                {"dt", r.dt},
                {"tolerance", r.tolerance},
                {"format", r.format},
                {"out_dir", r.out_dir},
                {"memory_cap_mb", r.memory_cap_mb},
                {"profile_extent", r.profile_extent},
                {"beta_sweep", r.beta_sweep},
                {"sigma_sweep", r.sigma_sweep}}},
              {"circuit",
               {{"Lg", c.inductance},
                {"Cg", c.ground_capacitance},
                {"Cc", c.coupling_capacitance},
                {"Cp", c.parasitic_capacitance},
                {"sigma_rel", c.sigma_rel},
                {"seed", c.seed},
                {"realizations", c.realizations},
                {"lattice", lattice_json(c.lattice)}}}};
}

void throw_if_any(const std::vector<std::string>& diagnostics) {
  if (diagnostics.empty()) return;
  std::string msg;
  for (const auto& d : diagnostics) msg += (msg.empty() ? "" : "\n") + d;
  throw ConfigError(msg);
}

double estimate_full_model_mb(const LatticeSpec& lattice, std::size_t qubits, Engine engine, int krylov_max) {
  const double dim = double(lattice.lattice_sites() + qubits);
  // CSR: about four stored entries per row (value + column) plus row offsets, and two
  // transient triplet lists (32 bytes per entry) while the matrix is assembled.
  const double matrix = dim * (4.0 * (16.0 + 8.0) + 8.0 + 2.0 * 4.0 * 32.0);
  const double work = dim * 16.0 * (engine == Engine::krylov ? double(krylov_max) + 3.0 : 5.0);
  // state, cavity modes and one scratch field per emitter
  const double fields = dim * 16.0 * (1.0 + 2.0 * double(std::max<std::size_t>(qubits, 1)));
  return (matrix + work + fields) / (1024.0 * 1024.0);
}

int suggest_lattice_side(double cap_mb, std::size_t qubits, Engine engine) {
  int n = 2;
  while (n < 100000) {
    LatticeSpec s{n + 1, n + 1, 0.0, 1.0, 1.0, Boundary::periodic};
    if (estimate_full_model_mb(s, qubits, engine) > cap_mb) break;
    ++n;
  }
  return n;
}

}  // namespace edgeqed
