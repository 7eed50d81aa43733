#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "covsyn/automaton.hpp"
#include "covsyn/config.hpp"

namespace covsyn {

int capacity_storage(int n_f, int u, int v, int delta_o, int delta_c, int delta_s);

/// FIFO queue of (command, remaining storage time), head first.
using StorageState = std::vector<std::pair<std::string, int>>;
/// Empty (idle) or the pending (event, countdown) pairs of the command in use.
using ExecutionState = std::vector<std::pair<std::string, int>>;

std::string storage_state_name(const StorageState& q);  ///< "ε" or "(v1,0)(v2,1)"
StorageState parse_storage_state(std::string_view name);
std::string execution_state_name(const ExecutionState& q);  ///< "{}" or "{(a1,0),(a2,-1)}"
ExecutionState parse_execution_state(std::string_view name);

/// Tick(q): entries at storage time 0 are dropped, the others count down.
StorageState storage_tick(const StorageState& q);
/// Rem(q, γ): drops the earliest entry holding γ.
StorageState storage_remove(const StorageState& q, const std::string& command);

Automaton build_command_storage(const SystemConfig& cfg);
Automaton build_command_execution(const SystemConfig& cfg);

/// Reads a plant over Σ and checks its alphabet and the damage states
/// against `cfg`. Marking in the file is kept but plays no role downstream.
Automaton load_plant(const std::string& path, const SystemConfig& cfg);
void check_plant(const Automaton& g, const SystemConfig& cfg);

struct NetworkedPlant {
  Automaton cs;
  Automaton ce;
  Automaton g;
  /// CS || CE || G after pruning, reachable part.
  Automaton g_new;
  /// Component states of each G_new state.
  std::vector<StateId> cs_of;
  std::vector<StateId> ce_of;
  std::vector<StateId> g_of;
  /// Per G state: member of Q_d.
  std::vector<char> damage;

  bool is_damage(StateId g_new_state) const { return damage[g_of[g_new_state]] != 0; }
};

/// G_temp = CS||CE||G, then removes states whose active command has no event
/// enabled in G and tick transitions that would skip a usable stored command.
NetworkedPlant compose_and_prune_plant(const Automaton& cs, const Automaton& ce, const Automaton& g,
                                       const SystemConfig& cfg);
NetworkedPlant build_networked_plant(const Automaton& g, const SystemConfig& cfg);

/// Post-hoc checks of the pruning rules, FIFO fetch order and uncontrollable
/// liveness. Returns one message per violation.
std::vector<std::string> check_networked_plant(const NetworkedPlant& plant, const SystemConfig& cfg);

/// Throws ValidationError when G_new has a cycle made of non-tick events.
void check_activity_loop_free(const Automaton& g_new);
/// Largest number of plant events that can occur between two ticks.
/// Requires an activity-loop-free automaton.
int max_events_per_tick(const Automaton& g_new);

}  // namespace covsyn
