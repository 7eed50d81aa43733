#include "covsyn/pipeline.hpp"

#include "covsyn/attacker.hpp"
#include "covsyn/channels.hpp"
#include "covsyn/error.hpp"
#include "covsyn/text_format.hpp"

namespace covsyn {

Components build_components(const SystemConfig& cfg, const Automaton& g, const Automaton& ns) {
  Components c;
  c.cfg = cfg;
  c.plant = build_networked_plant(g, cfg);
  check_activity_loop_free(c.plant.g_new);
  const int per_tick = max_events_per_tick(c.plant.g_new);
  if (per_tick > cfg.rates.n_f) {
    c.warnings.push_back("plant can fire " + std::to_string(per_tick) + " events between ticks, above n_f=" +
                         std::to_string(cfg.rates.n_f));
  }
  for (const auto& issue : check_networked_plant(c.plant, cfg)) c.warnings.push_back(issue);
  c.ac = build_attack_constraints(cfg);
  c.oc = build_observation_channel(cfg);
  c.oc_t = relabel_to_attack_free(c.oc);
  c.cc = build_control_channel(cfg);
  c.ns = ns;
  const auto report = validate_networked_supervisor(ns, cfg);
  if (!report.ok()) throw ValidationError("invalid networked supervisor:\n" + report.to_text());
  c.monitor = build_monitor(c.ns, c.plant.g_new, c.oc_t, c.cc, cfg);
  return c;
}

Components load_components(const std::string& config_path, const std::string& plant_path,
                           const std::string& ns_path) {
  const SystemConfig cfg = read_config_file(config_path);
  const Automaton g = load_plant(plant_path, cfg);
  const Automaton ns = read_automaton_file(ns_path);
  return build_components(cfg, g, ns);
}

SynthesisProblem build_problem(const Components& c) {
  return build_problem(c.plant, c.ac, c.oc, c.ns, c.cc, c.monitor, c.cfg);
}

std::string size_report(const Components& c) {
  const Automaton oc_full = build_observation_channel(c.cfg, ChannelScope::full);
  const Automaton cc_full = build_control_channel(c.cfg, ChannelScope::full);
  SizeInputs in;
  in.ac = &c.ac;
  in.oc_full = &oc_full;
  in.cc_full = &cc_full;
  in.cs = &c.plant.cs;
  in.ce = &c.plant.ce;
  in.m = &c.monitor.automaton;
  in.monitor_product_states = c.monitor.product_states;
  std::string out = format_size_report(state_size_report(c.cfg, in));
  out += "OC reachable: states=" + std::to_string(c.oc.state_count()) + '\n';
  out += "CC reachable: states=" + std::to_string(c.cc.state_count()) + '\n';
  out += "G_new: states=" + std::to_string(c.plant.g_new.state_count()) + '\n';
  return out;
}

}  // namespace covsyn
