#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covsyn/automaton.hpp"
#include "covsyn/config.hpp"
#include "covsyn/operations.hpp"

namespace covsyn {

struct NetworkedPlant;
struct Monitor;

enum class SynthesisMode { nonblocking, reachable };

std::string_view mode_name(SynthesisMode mode);
std::optional<SynthesisMode> parse_mode(std::string_view text);

/// Generic partial-observation control problem with Σ_c ⊆ Σ_o.
struct ControlProblem {
  const Automaton* plant = nullptr;
  std::vector<char> bad;     ///< per plant state
  std::vector<char> target;  ///< per plant state
  ControlConstraint constraint;
};

/// Observer-based fixpoint state: which observer states survive and which
/// observer edges stay enabled.
struct Fixpoint {
  Observer observer;
  std::vector<char> alive;
  /// enabled[x][i] refers to observer.automaton.edges(x)[i].
  std::vector<std::vector<char>> enabled;
  std::size_t rounds = 0;
};

struct SupervisorResult {
  /// Empty when no supervisor meets the requirements.
  std::optional<Automaton> supervisor;
  Fixpoint fixpoint;
  /// Observer state behind each supervisor state; kNoState for the dump state.
  std::vector<StateId> observer_state;
};

struct SupervisorNaming {
  std::string name = "S";
  std::string prefix = "S";
};

/// Supremal controllable and normal supervisor avoiding `bad`; in
/// nonblocking mode every reachable closed-loop state must also reach
/// `target`, in reachable mode some target state must be reachable.
SupervisorResult synthesize_supervisor(const ControlProblem& problem, SynthesisMode mode,
                                       const SupervisorNaming& naming = {});

/// Turns a fixpoint into a supervisor automaton: reachable surviving
/// observer states, unobserved self-loops, and a dump state "{}" absorbing
/// uncontrollable events the plant cannot produce. All states are marked.
SupervisorResult realize_supervisor(const ControlProblem& problem, Fixpoint fixpoint, const SupervisorNaming& naming);

/// P = G_new||AC||OC||NS||CC||M with bad and target state sets.
struct SynthesisProblem {
  Automaton plant;
  /// Per P state: G_new, AC, OC, NS, CC, M component ids.
  std::vector<std::vector<StateId>> components;
  std::vector<char> bad;
  std::vector<char> target;
  ControlConstraint constraint;
  EventSet alphabet;

  ControlProblem control() const { return {&plant, bad, target, constraint}; }
};

SynthesisProblem build_problem(const NetworkedPlant& g_new, const Automaton& ac, const Automaton& oc,
                               const Automaton& ns, const Automaton& cc, const Monitor& m, const SystemConfig& cfg);

SupervisorResult synthesize_supremal_attack(const SynthesisProblem& p, SynthesisMode mode);

struct CheckResult {
  bool holds = false;
  /// Shortest trace to a bad state (covertness), to a blocking state
  /// (nonblocking) or to a target state (reachability).
  std::vector<EventLabel> witness;
  bool has_witness = false;
};

Product closed_loop(const SynthesisProblem& p, const Automaton& a);
CheckResult verify_covert(const SynthesisProblem& p, const Automaton& a);
CheckResult verify_damage_nonblocking(const SynthesisProblem& p, const Automaton& a);
CheckResult verify_damage_reachable(const SynthesisProblem& p, const Automaton& a);

/// The synthesized attack with one more controllable edge re-enabled at
/// supervisor state `state`. A dead target observer state is restored
/// together with the dead observer region reachable from it, with all edges
/// enabled. Returns nullopt when the observer has no such edge.
std::optional<Automaton> extend_attack(const SynthesisProblem& p, const SupervisorResult& result, StateId state,
                                       const EventLabel& event);

struct LocalMaximality {
  std::size_t edits = 0;
  /// "(state, event)" for every edit that kept the attack valid.
  std::vector<std::string> counterexamples;
};

/// Tries every single re-enabling edit and records those that stay covert
/// and satisfy the mode contract.
LocalMaximality check_local_maximality(const SynthesisProblem& p, const SupervisorResult& result,
                                       SynthesisMode mode);

struct SizeLine {
  std::string component;
  std::uint64_t count = 0;
  std::string bound;   ///< closed-form value, e.g. "73" or "2^1200"
  bool exact = false;  ///< count must equal the bound, otherwise count ≤ bound
  bool ok = false;
};

struct SizeInputs {
  const Automaton* ac = nullptr;
  const Automaton* oc_full = nullptr;
  const Automaton* cc_full = nullptr;
  const Automaton* cs = nullptr;
  const Automaton* ce = nullptr;
  const Automaton* m = nullptr;
  /// |Q_ns|·|Q_new|·|Q_oc|·|Q_cc| for the monitor bound; 0 skips that line.
  std::uint64_t monitor_product_states = 0;
};

std::vector<SizeLine> state_size_report(const SystemConfig& cfg, const SizeInputs& in);
std::string format_size_report(const std::vector<SizeLine>& lines);

}  // namespace covsyn
