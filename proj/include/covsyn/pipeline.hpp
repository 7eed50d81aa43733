#pragma once

#include <string>

#include "covsyn/automaton.hpp"
#include "covsyn/config.hpp"
#include "covsyn/plant.hpp"
#include "covsyn/supervision.hpp"
#include "covsyn/synthesis.hpp"

namespace covsyn {

/// Every component of the networked closed loop for one configuration.
struct Components {
  SystemConfig cfg;
  NetworkedPlant plant;
  Automaton ac;
  Automaton oc;
  Automaton oc_t;
  Automaton cc;
  Automaton ns;
  Monitor monitor;
  /// Non-fatal findings, e.g. the plant firing more than N_f events per tick.
  std::vector<std::string> warnings;
};

/// Builds and validates all components. Throws ValidationError when the
/// supervisor or the plant composition is invalid.
Components build_components(const SystemConfig& cfg, const Automaton& g, const Automaton& ns);
Components load_components(const std::string& config_path, const std::string& plant_path, const std::string& ns_path);

SynthesisProblem build_problem(const Components& c);
std::string size_report(const Components& c);

}  // namespace covsyn
