// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "covsyn/attacker.hpp"
#include "covsyn/channels.hpp"
#include "covsyn/pipeline.hpp"
#include "properties.hpp"

using namespace covsyn;

namespace {

// Runtime budgets in seconds.
constexpr double kBudgetCapacity = 1.0;
constexpr double kBudgetSizes = 5.0;
constexpr double kBudgetSynthesis = 600.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, double budget, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget > 0 && secs > budget) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(budget) + " s budget)";
  }
  if (!o.pass) ++failures;
  char time[32];
  std::snprintf(time, sizeof time, "%.3fs", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " [" << time << "]: " << o.detail << '\n';
}

Components load(const std::string& name) {
  return load_components(support::fixture(name + "/system.cfg"), support::fixture(name + "/plant.fsa"),
                         support::fixture(name + "/ns.fsa"));
}

// States of `a` reachable by the word, tracking every nondeterministic branch.
std::vector<StateId> run_word(const Automaton& a, const std::vector<EventLabel>& w) {
  std::vector<StateId> now{a.initial()};
  for (const auto& e : w) {
    const EventId id = a.event_id(e);
    std::vector<StateId> next;
    for (StateId s : now) {
      for (const auto& edge : a.successors(s, id)) next.push_back(edge.target);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    now = std::move(next);
  }
  return now;
}

}  // namespace

int main() {
  const SystemConfig gw_cfg = read_config_file(support::fixture("guideway/system.cfg"));

  criterion(1, kBudgetCapacity, [&] {
    const int c_oc = capacity_observation(gw_cfg.rates.n_f, gw_cfg.rates.u, gw_cfg.delta_o);
    const int c_cc = capacity_control(gw_cfg.rates.n_f, gw_cfg.rates.u, gw_cfg.rates.v, gw_cfg.delta_o, gw_cfg.delta_c);
    const int c_cs = capacity_storage(gw_cfg.rates.n_f, gw_cfg.rates.u, gw_cfg.rates.v, gw_cfg.delta_o, gw_cfg.delta_c,
                                      gw_cfg.delta_s);
    std::ostringstream d;
    d << "C_oc=" << c_oc << " C_cc=" << c_cc << " C_cs=" << c_cs << " (expected 2, 3, 3)";
    return Outcome{c_oc == 2 && c_cc == 3 && c_cs == 3, d.str()};
  });

  criterion(2, kBudgetSizes, [&] {
    const Automaton ac = build_attack_constraints(gw_cfg);
    const Automaton oc = build_observation_channel(gw_cfg, ChannelScope::full);
    const Automaton cc = build_control_channel(gw_cfg, ChannelScope::full);
    const Automaton cs = build_command_storage(gw_cfg);
    const Automaton ce = build_command_execution(gw_cfg);
    SizeInputs in{&ac, &oc, &cc, &cs, &ce, nullptr, 0};
    const auto lines = state_size_report(gw_cfg, in);
    bool ok = true;
    std::ostringstream d;
    for (const auto& l : lines) {
      ok = ok && l.ok;
      d << l.component << "=" << l.count << (l.exact ? "/" : "<=") << l.bound << (l.ok ? " " : "! ");
    }
    return Outcome{ok, d.str()};
  });

  criterion(3, 0, [&] {
    ChannelSpec spec;
    spec.name = "OC";
    spec.messages = {"a", "b"};
    spec.entry = {EventLabel::compromised("a"), EventLabel::compromised("b")};
    spec.exit = {EventLabel::out("a"), EventLabel::out("b")};
    spec.delta = 1;
    spec.capacity = 3;
    const Automaton ch = build_channel(spec, ChannelScope::full);
    const std::string q = "{(a,0),(a,1),(b,1)}";
    const auto a_out = support::successor_names(ch, q, "a_out");
    const auto ticks = support::successor_names(ch, q, "tick");
    const bool ok = a_out == std::set<std::string>{"{(a,0),(b,1)}", "{(a,1),(b,1)}"} && ticks.empty();
    return Outcome{ok, "a_out successors=" + std::to_string(a_out.size()) +
                           " tick successors=" + std::to_string(ticks.size())};
  });

  const Components gw = load("guideway");
  const SynthesisProblem gw_p = build_problem(gw);
  SupervisorResult gw_nb;

  criterion(4, kBudgetSynthesis, [&] {
    gw_nb = synthesize_supremal_attack(gw_p, SynthesisMode::nonblocking);
    if (!gw_nb.supervisor) return Outcome{false, "no attack synthesized"};
    const Automaton& a = *gw_nb.supervisor;
    const bool covert = verify_covert(gw_p, a).holds;
    const Product loop = closed_loop(gw_p, a);
    const bool nonblocking = verify_damage_nonblocking(gw_p, a).holds;
    // First observation a1, answered by b1#, then the supervisor's reaction.
    const auto w = support::word(gw_p.plant, {"v3_in", "v3_out", "v3", "a1", "b1#", "stop", "b1_out", "v2_in",
                                              "v2_out", "v2", "b1"});
    bool damage5 = false;
    for (StateId s : run_word(loop.automaton, w)) {
      const StateId g = gw.plant.g_of[gw_p.components[loop.components[s][0]][0]];
      damage5 = damage5 || gw.plant.g.state_name(g) == "5";
    }
    std::ostringstream d;
    d << "|P|=" << gw_p.plant.state_count() << " |A|=" << a.state_count() << " covert=" << covert
      << " nonblocking=" << nonblocking << " a1->b1# trace reaches G=5: " << damage5;
    return Outcome{covert && nonblocking && damage5, d.str()};
  });

  criterion(5, kBudgetSynthesis, [&] {
    const auto re = synthesize_supremal_attack(gw_p, SynthesisMode::reachable);
    if (!re.supervisor || !gw_nb.supervisor) return Outcome{false, "missing attack"};
    const bool attack_lang = language_included(*gw_nb.supervisor, *re.supervisor, 12);
    const bool loop_lang =
        language_included(closed_loop(gw_p, *gw_nb.supervisor).automaton, closed_loop(gw_p, *re.supervisor).automaton, 12);
    std::ostringstream d;
    d << "|A_reach|=" << re.supervisor->state_count() << " L(A_nb)<=L(A_reach) to depth 12: " << attack_lang
      << ", L(P||A_nb)<=L(P||A_reach): " << loop_lang;
    return Outcome{attack_lang && loop_lang, d.str()};
  });

  criterion(6, 0, [&] {
    const Automaton fwd = forwarding_attack(gw.cfg);
    const Product loop = closed_loop(gw_p, fwd);
    std::size_t detected = 0;
    for (const auto& c : loop.components) detected += gw_p.components[c[0]][5] == gw.monitor.detection;
    return Outcome{detected == 0, "closed-loop states=" + std::to_string(loop.automaton.state_count()) +
                                      " with monitor at the detection state=" + std::to_string(detected)};
  });

  criterion(7, kBudgetSynthesis, [&] {
    int outputs = 0, valid = 0;
    for (const std::string name : {"guideway", "fork"}) {
      for (const bool forwarded : {true, false}) {
        Components c = load(name);
        c.cfg.count_forwarded = forwarded;
        c.ac = build_attack_constraints(c.cfg);
        const SynthesisProblem p = build_problem(c);
        for (const SynthesisMode mode : {SynthesisMode::nonblocking, SynthesisMode::reachable}) {
          const auto r = synthesize_supremal_attack(p, mode);
          if (!r.supervisor) continue;
          ++outputs;
          valid += validate_attack(*r.supervisor, p.constraint, p.alphabet).ok();
        }
      }
    }
    return Outcome{outputs > 0 && valid == outputs,
                   std::to_string(valid) + "/" + std::to_string(outputs) + " synthesized attacks validate"};
  });

  criterion(8, kBudgetSynthesis, [&] {
    std::ostringstream d;
    bool ok = true;
    for (const std::string name : {"fork", "guideway"}) {
      const Components c = load(name);
      const SynthesisProblem p = build_problem(c);
      for (const SynthesisMode mode : {SynthesisMode::nonblocking, SynthesisMode::reachable}) {
        const auto r = synthesize_supremal_attack(p, mode);
        if (!r.supervisor) {
          ok = false;
          d << name << '/' << mode_name(mode) << ": no attack; ";
          continue;
        }
        const LocalMaximality lm = check_local_maximality(p, r, mode);
        ok = ok && lm.counterexamples.empty() && lm.edits > 0;
        d << name << '/' << mode_name(mode) << ": " << lm.edits << " edits, " << lm.counterexamples.size()
          << " kept the contract; ";
      }
    }
    return Outcome{ok, d.str()};
  });

  criterion(9, 0, [&] {
    const auto t = support::run_kernel_properties(20240611u, 500);
    std::ostringstream d;
    d << t.instances << " instances: determinism " << t.determinism << ", projection " << t.projection
      << ", commutativity " << t.commutativity << ", associativity " << t.associativity << ", round-trip "
      << t.round_trip;
    return Outcome{t.instances >= 500 && t.all_pass(), d.str()};
  });

  return failures == 0 ? 0 : 1;
}
