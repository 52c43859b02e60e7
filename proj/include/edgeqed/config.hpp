// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "edgeqed/circuit.hpp"
#include "edgeqed/lattice.hpp"
#include "edgeqed/propagators.hpp"

namespace edgeqed {

using Json = nlohmann::ordered_json;

struct RunSettings {
  Engine engine = Engine::chebyshev;
  double t_end = 400.0;
  double dt = 0.1;
  double tolerance = 1e-9;
  std::string format = "csv";
  std::string out_dir = "edgeqed-out";
  double memory_cap_mb = 2048.0;
  int profile_extent = 100;         // cavity profile: rows 0..extent, columns -extent..extent
  std::vector<double> beta_sweep;   // anisotropy scenario
  std::vector<double> sigma_sweep;  // circuit scenario
};

struct ScenarioConfig {
  std::string scenario = "spectra";
  LatticeSpec lattice{300, 300, 0.0, 1.0, 1.0, Boundary::periodic};
  QubitArrangement qubits;
  RunSettings run;
  CircuitSpec circuit;
};

// Built-in values for every key; a config file only lists what it changes.
const Json& default_config_json();

// Strict reading of an already merged document. Unknown keys, wrong types and every
// violated constraint are appended to `diagnostics` with their key path; the returned
// config is only meaningful when nothing was appended.
ScenarioConfig config_from_json(const Json& doc, std::vector<std::string>& diagnostics);

// Parses config text (JSON). Syntax errors are reported with line and column.
Json parse_config_text(const std::string& text, std::vector<std::string>& diagnostics);

// Reads a config file; an empty path gives an empty document.
Json read_config_file(const std::string& path, std::vector<std::string>& diagnostics);

// Fully resolved config as JSON (the manifest form; reading it back gives the same config).
Json to_json(const ScenarioConfig& cfg);

// Throws ConfigError listing every diagnostic, one per line.
void throw_if_any(const std::vector<std::string>& diagnostics);

// Rough peak memory of a full-model run in MiB (Hamiltonian, propagator work vectors,
// cavity modes).
double estimate_full_model_mb(const LatticeSpec& lattice, std::size_t qubits, Engine engine, int krylov_max = 60);

// Largest square n x n lattice whose full-model estimate stays under the cap.
int suggest_lattice_side(double cap_mb, std::size_t qubits, Engine engine);

}  // namespace edgeqed
