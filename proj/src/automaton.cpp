#include "covsyn/automaton.hpp"

#include <algorithm>

#include "covsyn/error.hpp"

namespace covsyn {

Alphabet::Alphabet(std::vector<EventLabel> events) : events_(std::move(events)) {
  std::sort(events_.begin(), events_.end());
  events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
  by_spelling_.reserve(events_.size());
  for (EventId id = 0; id < events_.size(); ++id) {
    auto [it, inserted] = by_spelling_.emplace(events_[id].spelling(), id);
    if (!inserted) {
      throw ValidationError("alphabet spells two different events as '" + it->first + "'");
    }
  }
}

Alphabet::Alphabet(const EventSet& events) : Alphabet(std::vector<EventLabel>(events.begin(), events.end())) {}

std::optional<EventId> Alphabet::find(const EventLabel& label) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), label);
  if (it == events_.end() || *it != label) return std::nullopt;
  return static_cast<EventId>(it - events_.begin());
}

std::optional<EventId> Alphabet::find_spelling(std::string_view spelling) const {
  auto it = by_spelling_.find(std::string(spelling));
  if (it == by_spelling_.end()) return std::nullopt;
  return it->second;
}

Automaton::Automaton(std::string name, Alphabet alphabet)
    : name_(std::move(name)), alphabet_(std::move(alphabet)) {}

std::size_t Automaton::transition_count() const noexcept {
  std::size_t n = 0;
  for (const auto& edges : out_) n += edges.size();
  return n;
}

std::optional<StateId> Automaton::find_state(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateId Automaton::state(std::string_view name) const {
  auto s = find_state(name);
  if (!s) throw ValidationError("automaton '" + name_ + "' has no state '" + std::string(name) + "'");
  return *s;
}

StateId Automaton::add_state(std::string name, bool marked) {
  if (name.empty()) throw ValidationError("empty state name in automaton '" + name_ + "'");
  const auto id = static_cast<StateId>(names_.size());
  auto [it, inserted] = index_.emplace(name, id);
  if (!inserted) throw ValidationError("duplicate state '" + name + "' in automaton '" + name_ + "'");
  names_.push_back(std::move(name));
  out_.emplace_back();
  marked_.push_back(marked ? 1 : 0);
  return id;
}

void Automaton::check_state(StateId s) const {
  if (s >= names_.size()) {
    throw ValidationError("state id " + std::to_string(s) + " out of range in automaton '" + name_ + "'");
  }
}

void Automaton::add_transition(StateId source, EventId event, StateId target) {
  check_state(source);
  check_state(target);
  if (event >= alphabet_.size()) {
    throw ValidationError("event id out of range in automaton '" + name_ + "'");
  }
  auto& edges = out_[source];
  const Edge edge{event, target};
  auto it = std::lower_bound(edges.begin(), edges.end(), edge);
  if (it == edges.end() || *it != edge) edges.insert(it, edge);
}

void Automaton::add_transition(StateId source, const EventLabel& event, StateId target) {
  add_transition(source, event_id(event), target);
}

void Automaton::set_initial(StateId s) {
  check_state(s);
  initial_ = s;
}

void Automaton::set_marked(StateId s, bool marked) {
  check_state(s);
  marked_[s] = marked ? 1 : 0;
}

std::vector<StateId> Automaton::marked_states() const {
  std::vector<StateId> result;
  for (StateId s = 0; s < marked_.size(); ++s) {
    if (marked_[s]) result.push_back(s);
  }
  return result;
}

std::span<const Edge> Automaton::successors(StateId s, EventId event) const {
  const auto& edges = out_.at(s);
  auto lo = std::lower_bound(edges.begin(), edges.end(), Edge{event, 0});
  auto hi = lo;
  while (hi != edges.end() && hi->event == event) ++hi;
  return {edges.data() + (lo - edges.begin()), static_cast<std::size_t>(hi - lo)};
}

StateId Automaton::successor(StateId s, EventId event) const {
  auto succ = successors(s, event);
  return succ.empty() ? kNoState : succ.front().target;
}

EventId Automaton::event_id(const EventLabel& label) const {
  auto id = alphabet_.find(label);
  if (!id) {
    throw ValidationError("event '" + label.spelling() + "' is not in the alphabet of '" + name_ + "'");
  }
  return *id;
}

bool Automaton::is_deterministic() const {
  for (const auto& edges : out_) {
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].event == edges[i - 1].event) return false;
    }
  }
  return true;
}

}  // namespace covsyn
