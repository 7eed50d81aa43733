#pragma once

// Randomized kernel properties shared by the property tests and the
// acceptance binary.

#include <map>
#include <random>
#include <string>

#include "covsyn/operations.hpp"
#include "covsyn/text_format.hpp"
#include "support.hpp"

namespace support {

using covsyn::Automaton;
using covsyn::EventLabel;
using covsyn::EventSet;
using covsyn::StateId;

inline EventSet random_observed(std::mt19937& rng, const Automaton& a) {
  std::bernoulli_distribution keep(0.6);
  EventSet out;
  for (const auto& e : a.alphabet()) {
    if (keep(rng)) out.insert(e);
  }
  return out;
}

inline std::set<std::string> spellings(const EventSet& events) {
  std::set<std::string> out;
  for (const auto& e : events) out.insert(e.spelling());
  return out;
}

inline bool observer_is_deterministic(const Automaton& a, const EventSet& observed) {
  return covsyn::subset_construction(a, observed).is_deterministic();
}

// Projections of L(a) and of L(observer) onto `observed` agree up to length
// `depth`, both computed by the pair-exploration oracle.
inline bool projection_preserved(const Automaton& a, const EventSet& observed, std::size_t depth) {
  const auto obs = covsyn::subset_construction(a, observed);
  const auto names = spellings(observed);
  return projected_language(a, names, depth) == projected_language(obs, names, depth);
}

inline bool product_commutes(const Automaton& a, const Automaton& b) {
  const auto ab = covsyn::compose({&a, &b});
  const auto ba = covsyn::compose({&b, &a});
  if (ab.automaton.state_count() != ba.automaton.state_count()) return false;
  std::map<std::pair<StateId, StateId>, StateId> index;
  for (StateId s = 0; s < ba.automaton.state_count(); ++s) {
    index[{ba.components[s][1], ba.components[s][0]}] = s;
  }
  std::vector<StateId> mapping;
  for (StateId s = 0; s < ab.automaton.state_count(); ++s) {
    const auto it = index.find({ab.components[s][0], ab.components[s][1]});
    if (it == index.end()) return false;
    mapping.push_back(it->second);
  }
  return covsyn::is_isomorphism(ab.automaton, ba.automaton, mapping);
}

inline bool product_associates(const Automaton& a, const Automaton& b, const Automaton& c) {
  const auto ab = covsyn::compose({&a, &b});
  const auto left = covsyn::compose({&ab.automaton, &c});
  const auto bc = covsyn::compose({&b, &c});
  const auto right = covsyn::compose({&a, &bc.automaton});
  if (left.automaton.state_count() != right.automaton.state_count()) return false;
  using Triple = std::tuple<StateId, StateId, StateId>;
  std::map<Triple, StateId> index;
  for (StateId s = 0; s < right.automaton.state_count(); ++s) {
    const auto& inner = bc.components[right.components[s][1]];
    index[{right.components[s][0], inner[0], inner[1]}] = s;
  }
  std::vector<StateId> mapping;
  for (StateId s = 0; s < left.automaton.state_count(); ++s) {
    const auto& inner = ab.components[left.components[s][0]];
    const auto it = index.find({inner[0], inner[1], left.components[s][1]});
    if (it == index.end()) return false;
    mapping.push_back(it->second);
  }
  return covsyn::is_isomorphism(left.automaton, right.automaton, mapping);
}

inline bool round_trips(const Automaton& a) {
  const std::string text = covsyn::serialize_automaton(a);
  const Automaton back = covsyn::parse_automaton(text);
  if (back.state_count() != a.state_count()) return false;
  std::vector<StateId> mapping;
  for (StateId s = 0; s < a.state_count(); ++s) {
    const auto t = back.find_state(a.state_name(s));
    if (!t) return false;
    mapping.push_back(*t);
  }
  return covsyn::is_isomorphism(a, back, mapping) && covsyn::serialize_automaton(back) == text;
}

struct KernelTally {
  int instances = 0;
  int determinism = 0;
  int projection = 0;
  int commutativity = 0;
  int associativity = 0;
  int round_trip = 0;

  bool all_pass() const {
    return determinism == instances && projection == instances && commutativity == instances &&
           associativity == instances && round_trip == instances;
  }
};

// Instances have at most 6 states; alphabets overlap partially so products
// mix shared and private events.
inline KernelTally run_kernel_properties(std::uint32_t seed, int instances) {
  std::mt19937 rng(seed);
  KernelTally t;
  const std::vector<std::string> pool_a{"a", "b", "c"};
  const std::vector<std::string> pool_b{"b", "c", "d"};
  const std::vector<std::string> pool_c{"a", "d", "e"};
  std::uniform_real_distribution<double> density(0.05, 0.35);
  for (int i = 0; i < instances; ++i) {
    const Automaton a = random_automaton(rng, pool_a, 6, density(rng), "A");
    const Automaton b = random_automaton(rng, pool_b, 4, density(rng), "B");
    const Automaton c = random_automaton(rng, pool_c, 3, density(rng), "C");
    const EventSet observed = random_observed(rng, a);
    ++t.instances;
    t.determinism += observer_is_deterministic(a, observed);
    t.projection += projection_preserved(a, observed, 6);
    t.commutativity += product_commutes(a, b);
    t.associativity += product_associates(a, b, c);
    t.round_trip += round_trips(a);
  }
  return t;
}

}  // namespace support
