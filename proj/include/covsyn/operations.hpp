#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covsyn/automaton.hpp"

namespace covsyn {

/// Sorted, duplicate-free set of states of some host automaton.
using StateSet = std::vector<StateId>;

/// Per-event flag vector for `a`'s alphabet. Throws ValidationError when an
/// event of `events` is not in the alphabet.
std::vector<char> event_mask(const Automaton& a, const EventSet& events);

StateSet unobservable_reach(const Automaton& a, StateId q, const EventSet& observed);
StateSet unobservable_reach(const Automaton& a, StateId q, const std::vector<char>& observed_mask);
/// Closure of a whole set; `seeds` need not be sorted.
StateSet unobservable_reach(const Automaton& a, std::span<const StateId> seeds,
                            const std::vector<char>& observed_mask);

enum class ObserverNaming {
  members,  ///< "{q1,q2}" with member names in sorted order
  indexed,  ///< "<prefix><k>" in discovery order; "{}" for the empty set
};

struct ObserverOptions {
  ObserverNaming naming = ObserverNaming::members;
  std::string prefix = "X";
  /// Route observed events with no successor to an explicit empty-set state.
  /// The empty-set state gets no outgoing transitions.
  bool materialize_empty = false;
};

struct Observer {
  Automaton automaton;
  /// members[x] is the state set represented by observer state x.
  std::vector<StateSet> members;
  StateId empty_state = kNoState;
};

/// Subset construction over the full alphabet of `a`: observed events move
/// between unobservable-reach closures, unobserved events self-loop. A state is
/// marked when one of its members is marked.
Observer build_observer(const Automaton& a, const EventSet& observed, const ObserverOptions& options = {});
Automaton subset_construction(const Automaton& a, const EventSet& observed);
/// Subset construction followed by deletion of the unobserved events.
Automaton project(const Automaton& a, const EventSet& observed);

enum class ProductNaming {
  tuple,    ///< "(n1,n2,...)"
  indexed,  ///< "<prefix><k>" in discovery order
};

struct ProductOptions {
  ProductNaming naming = ProductNaming::tuple;
  std::string prefix = "P";
  std::string name;
};

struct Product {
  Automaton automaton;
  /// components[p][i] is the state of part i inside product state p.
  std::vector<std::vector<StateId>> components;
};

/// Synchronous product of any number of automata, reachable part only.
Product compose(std::span<const Automaton* const> parts, const ProductOptions& options = {});
Product compose(std::initializer_list<const Automaton*> parts, const ProductOptions& options = {});
Automaton synchronous_product(const Automaton& a1, const Automaton& a2);

/// States reachable from the initial state.
StateSet reachable(const Automaton& a);
/// States that can reach a marked state.
StateSet coreachable(const Automaton& a);
/// States that can reach some state with target[s] set.
std::vector<char> coreachable_to(const Automaton& a, const std::vector<char>& target);
Automaton trim(const Automaton& a);
bool is_nonblocking(const Automaton& a);

/// Copy of `a` restricted to `keep` (initial must be kept), renumbered in
/// ascending id order.
Automaton restrict_states(const Automaton& a, const std::vector<char>& keep);

enum class Acceptance { closed, marked };

bool accepts(const Automaton& a, std::span<const EventLabel> word, Acceptance mode = Acceptance::closed);

/// Breadth-first shortest event sequence from the initial state to a state
/// satisfying `goal`. Ties are broken by edge order, so results are stable.
std::optional<std::vector<EventLabel>> shortest_path(const Automaton& a,
                                                      const std::function<bool(StateId)>& goal);

/// Whether every word of L(a) of length at most `max_depth` is in L(b).
/// Both automata must share one alphabet. With no bound the check is exact.
/// On failure `counterexample` (when given) receives a shortest witness.
bool language_included(const Automaton& a, const Automaton& b, std::optional<std::size_t> max_depth = std::nullopt,
                       std::vector<EventLabel>* counterexample = nullptr);

/// Checks that `mapping` (a-state -> b-state) is a bijection preserving the
/// initial state, marking and the labelled transition relation.
bool is_isomorphism(const Automaton& a, const Automaton& b, const std::vector<StateId>& mapping);

}  // namespace covsyn
