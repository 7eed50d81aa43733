#include "covsyn/attacker.hpp"

#include <algorithm>
#include <sstream>

#include "covsyn/error.hpp"

namespace covsyn {

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.rule << ": state=" << v.state << " event=" << v.event << '\n';
  return out.str();
}

Automaton build_attack_constraints(const SystemConfig& cfg) {
  validate_config(cfg);
  const int u = cfg.rates.u;
  const auto sa = cfg.sigma_sa();
  const auto oa_only = names_minus(cfg.sigma_oa(), sa);
  const auto hidden = names_minus(cfg.sigma_o(), cfg.sigma_oa());
  const auto gamma = cfg.gamma();

  Automaton a("AC", Alphabet(attack_alphabet(cfg)));
  const StateId init = a.add_state("init");
  a.set_initial(init);
  std::vector<StateId> q;
  for (int n = 0; n <= u; ++n) q.push_back(a.add_state("q" + std::to_string(n)));
  for (const auto& s : oa_only) a.add_state("o_" + s);
  for (const auto& s : hidden) a.add_state("uo_" + s);

  // Events the attacker cannot see, and tick, loop at init.
  EventSet loops = labels(Role::plain, cfg.sigma_uo());
  loops = set_union(loops, labels(Role::out, cfg.sigma_o()));
  loops = set_union(loops, labels(Role::command, gamma));
  loops = set_union(loops, labels(Role::command_in, gamma));
  loops = set_union(loops, labels(Role::command_out, gamma));
  loops.insert(EventLabel::tick());
  for (const auto& e : loops) a.add_transition(init, e, init);
  // Readings the attacker cannot see pass straight into the channel.
  for (const auto& s : hidden) {
    const StateId uo = a.state("uo_" + s);
    a.add_transition(init, EventLabel::plain(s), uo);
    a.add_transition(uo, EventLabel::in(s), init);
  }
  // A compromised reading opens an insertion round.
  for (const auto& s : sa) a.add_transition(init, EventLabel::plain(s), q[0]);
  // Seen but uncompromised readings are forwarded. With U = 0 there is no
  // q1; the forwarded event then uses up the whole budget and lands in q_U.
  const StateId forwarded = cfg.count_forwarded ? q[std::min(1, u)] : q[0];
  for (const auto& s : oa_only) {
    const StateId o = a.state("o_" + s);
    a.add_transition(init, EventLabel::plain(s), o);
    a.add_transition(o, EventLabel::in(s), forwarded);
  }
  // Up to U insertions, closed by stop.
  for (int n = 0; n <= u; ++n) {
    a.add_transition(q[n], EventLabel::stop(), init);
    if (n < u) {
      for (const auto& s : sa) a.add_transition(q[n], EventLabel::compromised(s), q[n + 1]);
    }
  }
  return a;
}

ValidationReport validate_attack(const Automaton& a, const ControlConstraint& c, const EventSet& alphabet) {
  if (a.alphabet().to_set() != alphabet) {
    throw ValidationError("attack '" + a.name() + "' is not over the attack alphabet");
  }
  ValidationReport report;
  for (StateId s = 0; s < a.state_count(); ++s) {
    for (EventId e = 0; e < a.alphabet().size(); ++e) {
      const auto& label = a.alphabet()[e];
      auto succ = a.successors(s, e);
      if (!c.controllable.contains(label) && succ.empty()) {
        report.violations.push_back({a.state_name(s), label.spelling(), "SA-controllability"});
      }
      if (!c.observable.contains(label)) {
        for (const Edge& edge : succ) {
          if (edge.target != s) {
            report.violations.push_back({a.state_name(s), label.spelling(), "SA-observability"});
            break;
          }
        }
      }
    }
  }
  return report;
}

ValidationReport validate_attack(const Automaton& a, const SystemConfig& cfg) {
  return validate_attack(a, attack_control_constraint(cfg), attack_alphabet(cfg));
}

namespace {

void loop_uncontrollables(Automaton& a, StateId s, const ControlConstraint& c) {
  for (const auto& e : a.alphabet()) {
    if (!c.controllable.contains(e) && !a.enabled(s, a.event_id(e))) a.add_transition(s, e, s);
  }
}

}  // namespace

Automaton forwarding_attack(const SystemConfig& cfg) {
  const auto c = attack_control_constraint(cfg);
  Automaton a("A_forward", Alphabet(attack_alphabet(cfg)));
  const StateId idle = a.add_state("idle", true);
  const StateId sent = a.add_state("sent", true);
  a.set_initial(idle);
  for (const auto& s : cfg.sigma_sa()) {
    const StateId fwd = a.add_state("fwd_" + s, true);
    a.add_transition(idle, EventLabel::plain(s), fwd);
    a.add_transition(fwd, EventLabel::compromised(s), sent);
  }
  a.add_transition(idle, EventLabel::stop(), idle);
  a.add_transition(sent, EventLabel::stop(), idle);
  for (StateId s = 0; s < a.state_count(); ++s) loop_uncontrollables(a, s, c);
  return a;
}

Automaton silent_attack(const SystemConfig& cfg) {
  const auto c = attack_control_constraint(cfg);
  Automaton a("A_silent", Alphabet(attack_alphabet(cfg)));
  a.set_initial(a.add_state("s0", true));
  loop_uncontrollables(a, 0, c);
  return a;
}

}  // namespace covsyn
