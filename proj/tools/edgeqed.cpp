// SPDX-License-Identifier: Apache-2.0
// edgeqed: command-line front end for the emitter / zigzag-edge simulations.
#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>

#include "edgeqed/config.hpp"
#include "edgeqed/output.hpp"
#include "edgeqed/scenarios.hpp"

#ifdef EDGEQED_HAVE_OPENMP
#include <omp.h>
#endif

using namespace edgeqed;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

struct Overrides {
  std::optional<double> detuning, g, beta, gap, t_end, dt;
  std::optional<int> n;
  std::optional<std::string> engine;
};

struct Globals {
  std::string config;
  std::string out;
  std::string format;
  int threads = 0;
};

void apply_overrides(Json& doc, const Overrides& o, const Globals& g) {
  if (o.n) {
    // keep the aspect ratio of the resolved strip
    const int n1 = doc["lattice"]["n1"].get<int>(), n2 = doc["lattice"]["n2"].get<int>();
    doc["lattice"]["n1"] = *o.n;
    doc["lattice"]["n2"] = n1 > 0 ? int(std::lround(double(*o.n) * n2 / n1)) : *o.n;
  }
  if (o.beta) {
    doc["lattice"]["beta"] = *o.beta;
    if (doc["scenario"] == "anisotropy_fig3df") doc["run"]["beta_sweep"] = Json::array({*o.beta});
  }
  if (o.gap) doc["lattice"]["delta"] = *o.gap;
  if (doc["qubits"].is_array())
    for (auto& q : doc["qubits"]) {
      if (!q.is_object()) continue;
      if (o.detuning) q["detuning"] = *o.detuning;
      if (o.g) q["g"] = *o.g;
    }
  if (o.t_end) doc["run"]["t_end"] = *o.t_end;
  if (o.dt) doc["run"]["dt"] = *o.dt;
  if (o.engine) doc["run"]["engine"] = *o.engine;
  if (!g.out.empty()) doc["run"]["out_dir"] = g.out;
  if (!g.format.empty()) doc["run"]["format"] = g.format;
}

// Built-in defaults, then scenario defaults, then the file, then command-line overrides.
// An empty hint takes the scenario named in the file, else `fallback`.
ScenarioConfig resolve(const std::string& scenario_hint, const std::string& fallback, const Globals& g,
                       const Overrides& o, Json* resolved_doc) {
  std::vector<std::string> diag;
  const Json file = read_config_file(g.config, diag);
  throw_if_any(diag);
  std::string name = scenario_hint;
  if (name.empty()) name = file.is_object() && file.contains("scenario") && file["scenario"].is_string()
                               ? file["scenario"].get<std::string>()
                               : fallback;
  Json doc = default_config_json();
  try {
    doc.merge_patch(find_scenario(name).defaults);
  } catch (const ConfigError&) {
    // reported by config_from_json below
  }
  doc.merge_patch(file);
  doc["scenario"] = name;
  apply_overrides(doc, o, g);
  ScenarioConfig cfg = config_from_json(doc, diag);
  throw_if_any(diag);
  if (resolved_doc) *resolved_doc = to_json(cfg);
  return cfg;
}

int emit(const ScenarioResult& r, const ScenarioConfig& cfg, const std::vector<std::string>& command, int threads) {
  const std::string& dir = cfg.run.out_dir;
  std::vector<std::string> artifacts;
  for (const auto& t : r.tables) {
    std::ostringstream os;
    if (cfg.run.format == "json") {
      os << table_to_json(t).dump(2) << '\n';
      write_artifact(dir, t.name + ".json", os.str());
      artifacts.push_back(t.name + ".json");
    } else {
      write_csv(os, t);
      write_artifact(dir, t.name + ".csv", os.str());
      artifacts.push_back(t.name + ".csv");
    }
  }
  for (auto it = r.documents.begin(); it != r.documents.end(); ++it) {
    write_artifact(dir, it.key() + ".json", it.value().dump(2) + "\n");
    artifacts.push_back(it.key() + ".json");
  }
  const std::string summary = r.summary.dump(2) + "\n";
  write_artifact(dir, "summary.json", summary);
  artifacts.push_back("summary.json");
  write_artifact(dir, "manifest.json", make_manifest(command, to_json(cfg), threads, artifacts).dump(2) + "\n");
  std::cout << summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emitters on the zigzag edge of a honeycomb resonator lattice"};
  app.require_subcommand(1);
  Globals g;
  Overrides o;
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--out", g.out, "output directory (overrides run.out_dir)");
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "table format")->check(CLI::IsMember({"csv", "json"}));

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option_function<double>("--delta", [&](double v) { o.detuning = v; }, "qubit detuning (units of J)");
    sub->add_option_function<double>("--g", [&](double v) { o.g = v; }, "qubit coupling g (units of J)");
    sub->add_option_function<int>("--n", [&](int v) { o.n = v; }, "rows n1; n2 keeps the strip's aspect ratio");
    sub->add_option_function<double>("--beta", [&](double v) { o.beta = v; }, "inter-row hopping ratio");
    sub->add_option_function<double>("--gap", [&](double v) { o.gap = v; }, "sublattice offset delta of the lattice");
    sub->add_option_function<double>("--t-end", [&](double v) { o.t_end = v; }, "end time (1/J)");
    sub->add_option_function<double>("--dt", [&](double v) { o.dt = v; }, "sample step (1/J)");
    sub->add_option_function<std::string>("--engine", [&](const std::string& v) { o.engine = v; }, "chebyshev or krylov");
  };

  struct Task {
    CLI::App* sub;
    std::string scenario;  // empty: taken from the config file
    std::function<ScenarioResult(const ScenarioConfig&)> run;
  };
  std::vector<Task> tasks;
  auto task = [&](const char* name, const char* help, std::string scenario,
                  std::function<ScenarioResult(const ScenarioConfig&)> run) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    add_overrides(sub);
    tasks.push_back({sub, std::move(scenario), std::move(run)});
  };
  task("spectra", "dense spectrum: gap, flat-band count, Dirac point", "spectra", nullptr);
  task("cavity", "cavity-mode profile c(n,m) as CSV with tail slopes", "cavity_profile_fig2ab", nullptr);
  task("projector", "flat-band projector P and orthonormalizer M for the qubit positions", "", run_projector);
  task("effective-model", "Omega, Omega_R, gamma and K matrices as JSON", "effective_params", nullptr);
  task("evolve", "exact dynamics of the configured emitters with effective-model comparison", "", run_evolve);
  task("circuit", "LC circuit hoppings and disorder broadening", "circuit_report", nullptr);

  std::string scenario_name;
  CLI::App* run = app.add_subcommand("run", "run a named scenario");
  run->fallthrough();
  add_overrides(run);
  std::string scenario_help;
  for (const auto& s : scenario_registry()) scenario_help += "\n  " + s.name + ": " + s.description;
  run->add_option("scenario", scenario_name, "scenario name:" + scenario_help)->required();

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a config and print it with every default resolved");
  validate->fallthrough();
  validate->add_option("path", validate_path, "config file (defaults to --config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

#ifdef EDGEQED_HAVE_OPENMP
  if (g.threads > 0) omp_set_num_threads(g.threads);
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  const std::vector<std::string> command(argv, argv + argc);

  try {
    if (validate->parsed()) {
      if (!validate_path.empty()) g.config = validate_path;
      if (g.config.empty()) throw ConfigError("validate needs a config file");
      Json resolved;
      resolve("", "spectra", g, o, &resolved);
      std::cout << resolved.dump(2) << '\n';
      return 0;
    }
    if (run->parsed()) {
      const ScenarioInfo& info = find_scenario(scenario_name);
      const ScenarioConfig cfg = resolve(info.name, "", g, o, nullptr);
      return emit(info.run(cfg), cfg, command, threads);
    }
    for (const auto& t : tasks) {
      if (!t.sub->parsed()) continue;
      const ScenarioConfig cfg = resolve(t.scenario, "rabi_fig2c", g, o, nullptr);
      const ScenarioResult r = t.run ? t.run(cfg) : find_scenario(t.scenario).run(cfg);
      return emit(r, cfg, command, threads);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  }
  return 0;
}
