#pragma once

#include <cstdint>
#include <optional>

#include "covsyn/automaton.hpp"
#include "covsyn/config.hpp"
#include "covsyn/report.hpp"

namespace covsyn {

struct NetworkedPlant;

/// Network controllability (every event outside Γ^in defined at every state)
/// and network observability (events outside Γ^in ∪ Σ_o^out ∪ {tick} only
/// self-loop). Throws ValidationError on an alphabet mismatch.
ValidationReport validate_networked_supervisor(const Automaton& ns, const SystemConfig& cfg);

struct Monitor {
  Automaton automaton;
  /// The detection state ∅, or kNoState when no observation is ever
  /// unexplained.
  StateId detection = kNoState;
  /// Reachable states of NS||G_new||OC^T||CC.
  std::uint64_t product_states = 0;
};

/// Observer of NS||G_new||OC^T||CC over Σ_o^out ∪ Γ^in ∪ {tick}; observations
/// without a genuine explanation lead to ∅, which only loops on tick.
Monitor build_monitor(const Automaton& ns, const Automaton& g_new, const Automaton& oc_t, const Automaton& cc,
                      const SystemConfig& cfg);

/// NSC: counter states c0..cV; Γ^in counts up to V, any Σ_o^out or tick
/// resets the counter.
Automaton build_supervisor_constraints(const SystemConfig& cfg);

/// Synthesizes a networked supervisor whose attack-free closed loop keeps the
/// plant inside `spec` (an automaton over Σ whose marked states are the goal)
/// and can always complete a marked word. Returns nullopt when none exists.
std::optional<Automaton> synthesize_networked_supervisor(const NetworkedPlant& plant, const Automaton& oc_t,
                                                         const Automaton& cc, const Automaton& spec,
                                                         const SystemConfig& cfg);

/// Widens `a` to `alphabet` by adding self-loops for the missing events.
Automaton extend_with_self_loops(const Automaton& a, const EventSet& alphabet);

}  // namespace covsyn
