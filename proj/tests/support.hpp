#pragma once

// Independent oracles and generators for the test suites. Nothing here calls
// into the operations under test except for building inputs.

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "covsyn/automaton.hpp"
#include "covsyn/config.hpp"
#include "covsyn/text_format.hpp"

namespace support {

using covsyn::Automaton;
using covsyn::EventLabel;
using covsyn::StateId;
using Word = std::vector<std::string>;

#ifndef COVSYN_FIXTURES
#define COVSYN_FIXTURES "fixtures"
#endif

inline std::string fixture(const std::string& rel) { return std::string(COVSYN_FIXTURES) + "/" + rel; }

inline covsyn::SystemConfig config(const std::string& text) { return covsyn::parse_config(text); }

inline Automaton automaton(const std::string& text) { return covsyn::parse_automaton(text); }

// Plain breadth-first closure over transitions whose event spelling is not in
// `observed`.
inline std::set<std::string> closure(const Automaton& a, const std::string& from,
                                     const std::set<std::string>& observed) {
  std::set<std::string> seen{from};
  std::deque<StateId> work{a.state(from)};
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    for (const auto& e : a.edges(s)) {
      if (observed.contains(a.alphabet()[e.event].spelling())) continue;
      if (seen.insert(a.state_name(e.target)).second) work.push_back(e.target);
    }
  }
  return seen;
}

// Projected words of length ≤ max_len over runs of `a`, explored as
// (state, projected word) pairs so that no subset construction is involved.
inline std::set<Word> projected_language(const Automaton& a, const std::set<std::string>& observed,
                                         std::size_t max_len) {
  std::set<std::pair<StateId, Word>> seen;
  std::deque<std::pair<StateId, Word>> work;
  seen.insert({a.initial(), {}});
  work.push_back({a.initial(), {}});
  std::set<Word> words;
  while (!work.empty()) {
    auto [s, w] = work.front();
    work.pop_front();
    words.insert(w);
    for (const auto& e : a.edges(s)) {
      const std::string label = a.alphabet()[e.event].spelling();
      Word next = w;
      if (observed.contains(label)) {
        if (w.size() == max_len) continue;
        next.push_back(label);
      }
      if (seen.insert({e.target, next}).second) work.push_back({e.target, std::move(next)});
    }
  }
  return words;
}

// Every closed-behaviour word of length ≤ max_len.
inline std::set<Word> language(const Automaton& a, std::size_t max_len) {
  std::set<std::string> all;
  for (const auto& e : a.alphabet()) all.insert(e.spelling());
  return projected_language(a, all, max_len);
}

// Multisets over `kinds` element kinds with total multiplicity ≤ capacity,
// counted by explicit recursion over per-kind multiplicities.
inline std::uint64_t brute_force_multisets(int kinds, int capacity) {
  if (kinds == 0) return 1;
  std::uint64_t total = 0;
  for (int m = 0; m <= capacity; ++m) total += brute_force_multisets(kinds - 1, capacity - m);
  return total;
}

inline std::vector<std::string> event_pool(std::size_t n) {
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < n; ++i) pool.push_back(std::string(1, static_cast<char>('a' + i)));
  return pool;
}

// Random automaton with 1..max_states states over plain events drawn from
// `pool`, possibly nondeterministic.
inline Automaton random_automaton(std::mt19937& rng, const std::vector<std::string>& pool, int max_states,
                                  double density, const std::string& name = "R") {
  std::uniform_int_distribution<int> n_dist(1, max_states);
  const int n = n_dist(rng);
  std::vector<EventLabel> events;
  for (const auto& p : pool) events.push_back(EventLabel::plain(p));
  Automaton a(name, covsyn::Alphabet(events));
  std::bernoulli_distribution mark(0.3);
  for (int i = 0; i < n; ++i) a.add_state(name + std::to_string(i), mark(rng));
  a.set_initial(0);
  std::bernoulli_distribution edge(density);
  for (int s = 0; s < n; ++s) {
    for (std::size_t e = 0; e < events.size(); ++e) {
      for (int t = 0; t < n; ++t) {
        if (edge(rng)) a.add_transition(s, events[e], t);
      }
    }
  }
  return a;
}

// Deterministic variant: at most one target per (state, event).
inline Automaton random_dfa(std::mt19937& rng, const std::vector<std::string>& pool, int max_states, double density,
                            const std::string& name = "D") {
  std::uniform_int_distribution<int> n_dist(1, max_states);
  const int n = n_dist(rng);
  std::vector<EventLabel> events;
  for (const auto& p : pool) events.push_back(EventLabel::plain(p));
  Automaton a(name, covsyn::Alphabet(events));
  std::bernoulli_distribution mark(0.3);
  for (int i = 0; i < n; ++i) a.add_state(name + std::to_string(i), mark(rng));
  a.set_initial(0);
  std::bernoulli_distribution edge(density);
  std::uniform_int_distribution<int> target(0, n - 1);
  for (int s = 0; s < n; ++s) {
    for (const auto& e : events) {
      if (edge(rng)) a.add_transition(s, e, target(rng));
    }
  }
  return a;
}

// Transition triples by name, for comparing automata built independently.
inline std::set<std::tuple<std::string, std::string, std::string>> triples(const Automaton& a) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (StateId s = 0; s < a.state_count(); ++s) {
    for (const auto& e : a.edges(s)) {
      out.insert({a.state_name(s), a.alphabet()[e.event].spelling(), a.state_name(e.target)});
    }
  }
  return out;
}

inline std::set<std::string> successor_names(const Automaton& a, const std::string& from, const std::string& event) {
  std::set<std::string> out;
  const auto id = a.alphabet().find_spelling(event);
  if (!id) return out;
  for (const auto& e : a.successors(a.state(from), *id)) out.insert(a.state_name(e.target));
  return out;
}

inline std::vector<EventLabel> word(const Automaton& a, const std::vector<std::string>& spellings) {
  std::vector<EventLabel> out;
  for (const auto& s : spellings) out.push_back(a.alphabet()[*a.alphabet().find_spelling(s)]);
  return out;
}

}  // namespace support
