#include "covsyn/supervision.hpp"

#include "covsyn/error.hpp"
#include "covsyn/operations.hpp"
#include "covsyn/plant.hpp"
#include "covsyn/synthesis.hpp"

namespace covsyn {

ValidationReport validate_networked_supervisor(const Automaton& ns, const SystemConfig& cfg) {
  if (ns.alphabet().to_set() != attack_alphabet(cfg)) {
    throw ValidationError("networked supervisor '" + ns.name() + "' is not over the full networked alphabet");
  }
  const auto c = supervisor_control_constraint(cfg);
  ValidationReport report;
  for (StateId s = 0; s < ns.state_count(); ++s) {
    for (EventId e = 0; e < ns.alphabet().size(); ++e) {
      const auto& label = ns.alphabet()[e];
      auto succ = ns.successors(s, e);
      if (!c.controllable.contains(label) && succ.empty()) {
        report.violations.push_back({ns.state_name(s), label.spelling(), "network controllability"});
      }
      if (!c.observable.contains(label)) {
        for (const Edge& edge : succ) {
          if (edge.target != s) {
            report.violations.push_back({ns.state_name(s), label.spelling(), "network observability"});
            break;
          }
        }
      }
    }
  }
  return report;
}

Monitor build_monitor(const Automaton& ns, const Automaton& g_new, const Automaton& oc_t, const Automaton& cc,
                      const SystemConfig& cfg) {
  const auto report = validate_networked_supervisor(ns, cfg);
  if (!report.ok()) throw ValidationError("invalid networked supervisor:\n" + report.to_text());
  for (const auto& e : oc_t.alphabet()) {
    if (e.role() == Role::compromised || e.role() == Role::in) {
      throw ValidationError("monitor needs the relabeled observation channel");
    }
  }
  Product h = compose({&ns, &g_new, &oc_t, &cc}, {.naming = ProductNaming::indexed, .prefix = "H", .name = "H"});
  EventSet observed = labels(Role::out, cfg.sigma_o());
  observed = set_union(observed, labels(Role::command_in, cfg.gamma()));
  observed.insert(EventLabel::tick());
  Observer obs = build_observer(h.automaton, observed,
                                {.naming = ObserverNaming::indexed, .prefix = "M", .materialize_empty = true});
  Monitor m;
  m.automaton = std::move(obs.automaton);
  m.automaton.set_name("M");
  m.detection = obs.empty_state;
  m.product_states = h.automaton.state_count();
  if (m.detection != kNoState) m.automaton.add_transition(m.detection, EventLabel::tick(), m.detection);
  // Observer marking reflects member marking, which carries no meaning here.
  for (StateId s = 0; s < m.automaton.state_count(); ++s) m.automaton.set_marked(s, false);
  return m;
}

Automaton build_supervisor_constraints(const SystemConfig& cfg) {
  validate_config(cfg);
  EventSet alphabet = labels(Role::command_in, cfg.gamma());
  const EventSet resets = set_union(labels(Role::out, cfg.sigma_o()), EventSet{EventLabel::tick()});
  alphabet = set_union(alphabet, resets);
  Automaton a("NSC", Alphabet(alphabet));
  std::vector<StateId> c;
  for (int n = 0; n <= cfg.rates.v; ++n) c.push_back(a.add_state("c" + std::to_string(n)));
  a.set_initial(c[0]);
  for (int n = 0; n <= cfg.rates.v; ++n) {
    for (const auto& e : resets) a.add_transition(c[n], e, c[0]);
    if (n < cfg.rates.v) {
      for (const auto& g : cfg.gamma()) a.add_transition(c[n], EventLabel::command_in(g), c[n + 1]);
    }
  }
  return a;
}

Automaton extend_with_self_loops(const Automaton& a, const EventSet& alphabet) {
  const EventSet own = a.alphabet().to_set();
  for (const auto& e : own) {
    if (!alphabet.contains(e)) throw ValidationError("event '" + e.spelling() + "' is outside the target alphabet");
  }
  Automaton out(a.name(), Alphabet(alphabet));
  for (StateId s = 0; s < a.state_count(); ++s) out.add_state(a.state_name(s), a.is_marked(s));
  if (a.has_initial()) out.set_initial(a.initial());
  for (StateId s = 0; s < a.state_count(); ++s) {
    for (const Edge& e : a.edges(s)) out.add_transition(s, a.alphabet()[e.event], e.target);
    for (const auto& e : alphabet) {
      if (!own.contains(e)) out.add_transition(s, e, s);
    }
  }
  return out;
}

std::optional<Automaton> synthesize_networked_supervisor(const NetworkedPlant& plant, const Automaton& oc_t,
                                                         const Automaton& cc, const Automaton& spec,
                                                         const SystemConfig& cfg) {
  const EventSet sigma = labels(Role::plain, cfg.sigma());
  if (spec.alphabet().to_set() != sigma) throw ValidationError("specification must be over the plant events");

  // Complete the specification with a violation sink so that illegal plant
  // moves stay possible in the plant model and are recognised as bad.
  Automaton completed(spec.name(), spec.alphabet());
  for (StateId s = 0; s < spec.state_count(); ++s) completed.add_state(spec.state_name(s), spec.is_marked(s));
  completed.set_initial(spec.initial());
  const StateId violation = completed.add_state("violation");
  for (StateId s = 0; s < spec.state_count(); ++s) {
    for (const Edge& e : spec.edges(s)) completed.add_transition(s, e.event, e.target);
  }
  for (StateId s = 0; s < completed.state_count(); ++s) {
    for (EventId e = 0; e < completed.alphabet().size(); ++e) {
      if (!completed.enabled(s, e)) completed.add_transition(s, e, violation);
    }
  }

  const Automaton nsc = build_supervisor_constraints(cfg);
  Product h = compose({&plant.g_new, &oc_t, &nsc, &cc, &completed},
                      {.naming = ProductNaming::indexed, .prefix = "H", .name = "H"});
  ControlProblem problem;
  problem.plant = &h.automaton;
  problem.constraint = supervisor_control_constraint(cfg);
  problem.bad.assign(h.automaton.state_count(), 0);
  problem.target.assign(h.automaton.state_count(), 0);
  for (StateId s = 0; s < h.automaton.state_count(); ++s) {
    const StateId q = h.components[s][4];
    problem.bad[s] = q == violation;
    problem.target[s] = q != violation && completed.is_marked(q);
  }
  auto result = synthesize_supervisor(problem, SynthesisMode::nonblocking, {.name = "NS", .prefix = "N"});
  if (!result.supervisor) return std::nullopt;
  return extend_with_self_loops(*result.supervisor, attack_alphabet(cfg));
}

}  // namespace covsyn
