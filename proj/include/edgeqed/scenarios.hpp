// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "edgeqed/config.hpp"
#include "edgeqed/output.hpp"

namespace edgeqed {

struct ScenarioResult {
  Json summary = Json::object();
  std::vector<Table> tables;
  Json documents = Json::object();  // extra JSON artifacts by file stem
};

using ScenarioRunner = std::function<ScenarioResult(const ScenarioConfig&)>;

struct ScenarioInfo {
  std::string name;
  std::string description;
  Json defaults;  // merged over the built-in defaults before the config file
  ScenarioRunner run;
};

// Registered scenarios in a fixed order; also the tasks behind the single-purpose
// subcommands (spectra, cavity, projector, effective-model, evolve, circuit).
const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo& find_scenario(const std::string& name);

// Throws ConfigError (with a suggested side length) when a full-model run would exceed
// run.memory_cap_mb.
void check_memory_cap(const ScenarioConfig& cfg, std::size_t qubits);

// Subcommand tasks that are not figure scenarios.
ScenarioResult run_projector(const ScenarioConfig& cfg);
ScenarioResult run_evolve(const ScenarioConfig& cfg);

}  // namespace edgeqed
