#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "covsyn/event.hpp"

namespace covsyn {

using StateId = std::uint32_t;
using EventId = std::uint32_t;

inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
inline constexpr EventId kNoEvent = std::numeric_limits<EventId>::max();

/// Sorted, duplicate-free list of event labels. EventIds index into it.
class Alphabet {
 public:
  Alphabet() = default;
  /// Sorts and deduplicates. Throws ValidationError if two distinct labels
  /// share a spelling (e.g. a plant event and a command with the same name).
  explicit Alphabet(std::vector<EventLabel> events);
  explicit Alphabet(const EventSet& events);

  std::size_t size() const noexcept { return events_.size(); }
  const EventLabel& operator[](EventId id) const { return events_[id]; }
  std::optional<EventId> find(const EventLabel& label) const;
  std::optional<EventId> find_spelling(std::string_view spelling) const;
  bool contains(const EventLabel& label) const { return find(label).has_value(); }

  const std::vector<EventLabel>& events() const noexcept { return events_; }
  EventSet to_set() const { return {events_.begin(), events_.end()}; }
  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }

  bool operator==(const Alphabet& other) const { return events_ == other.events_; }

 private:
  std::vector<EventLabel> events_;
  std::unordered_map<std::string, EventId> by_spelling_;
};

struct Edge {
  EventId event;
  StateId target;

  auto operator<=>(const Edge&) const = default;
};

/// Finite automaton with a possibly nondeterministic transition relation.
///
/// States are identified by unique names; StateIds are dense indices in
/// insertion order. Outgoing edges of each state are kept sorted by
/// (event, target) without duplicates.
class Automaton {
 public:
  Automaton() = default;
  Automaton(std::string name, Alphabet alphabet);

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const Alphabet& alphabet() const noexcept { return alphabet_; }

  std::size_t state_count() const noexcept { return names_.size(); }
  std::size_t transition_count() const noexcept;
  const std::string& state_name(StateId s) const { return names_.at(s); }
  std::optional<StateId> find_state(std::string_view name) const;
  /// Throws ValidationError when the name is unknown.
  StateId state(std::string_view name) const;

  /// Throws ValidationError on duplicate names.
  StateId add_state(std::string name, bool marked = false);
  void add_transition(StateId source, EventId event, StateId target);
  void add_transition(StateId source, const EventLabel& event, StateId target);
  void set_initial(StateId s);
  void set_marked(StateId s, bool marked = true);

  StateId initial() const noexcept { return initial_; }
  bool has_initial() const noexcept { return initial_ != kNoState; }
  bool is_marked(StateId s) const { return marked_.at(s) != 0; }
  std::vector<StateId> marked_states() const;

  std::span<const Edge> edges(StateId s) const { return out_.at(s); }
  /// Targets of `event` from `s`, as a contiguous sub-span of edges(s).
  std::span<const Edge> successors(StateId s, EventId event) const;
  bool enabled(StateId s, EventId event) const { return !successors(s, event).empty(); }
  /// Single target for deterministic use; kNoState when undefined.
  StateId successor(StateId s, EventId event) const;

  EventId event_id(const EventLabel& label) const;
  bool is_deterministic() const;

 private:
  void check_state(StateId s) const;

  std::string name_;
  Alphabet alphabet_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> index_;
  std::vector<std::vector<Edge>> out_;
  std::vector<char> marked_;
  StateId initial_ = kNoState;
};

}  // namespace covsyn
