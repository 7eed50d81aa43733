#include "covsyn/operations.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "covsyn/error.hpp"

namespace covsyn {

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (StateId x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::string set_name(const Automaton& a, const StateSet& members) {
  std::vector<const std::string*> names;
  names.reserve(members.size());
  for (StateId s : members) names.push_back(&a.state_name(s));
  std::sort(names.begin(), names.end(), [](const auto* x, const auto* y) { return *x < *y; });
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += *names[i];
  }
  out += '}';
  return out;
}

void require_initial(const Automaton& a) {
  if (!a.has_initial()) throw ValidationError("automaton '" + a.name() + "' has no initial state");
}

}  // namespace

std::vector<char> event_mask(const Automaton& a, const EventSet& events) {
  std::vector<char> mask(a.alphabet().size(), 0);
  for (const auto& e : events) mask[a.event_id(e)] = 1;
  return mask;
}

StateSet unobservable_reach(const Automaton& a, std::span<const StateId> seeds, const std::vector<char>& observed) {
  std::vector<char> seen(a.state_count(), 0);
  std::vector<StateId> stack;
  StateSet out;
  for (StateId s : seeds) {
    if (s >= a.state_count()) throw ValidationError("unknown state id in automaton '" + a.name() + "'");
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (const Edge& e : a.edges(s)) {
      if (!observed[e.event] && !seen[e.target]) {
        seen[e.target] = 1;
        stack.push_back(e.target);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

StateSet unobservable_reach(const Automaton& a, StateId q, const std::vector<char>& observed) {
  return unobservable_reach(a, std::span<const StateId>(&q, 1), observed);
}

StateSet unobservable_reach(const Automaton& a, StateId q, const EventSet& observed) {
  return unobservable_reach(a, q, event_mask(a, observed));
}

Observer build_observer(const Automaton& a, const EventSet& observed, const ObserverOptions& options) {
  require_initial(a);
  const auto mask = event_mask(a, observed);
  const auto& alphabet = a.alphabet();
  Observer obs;
  obs.automaton = Automaton(a.name(), alphabet);
  std::unordered_map<StateSet, StateId, VectorHash> index;

  auto intern = [&](StateSet members) -> std::pair<StateId, bool> {
    auto it = index.find(members);
    if (it != index.end()) return {it->second, false};
    const bool empty = members.empty();
    bool marked = false;
    for (StateId s : members) marked = marked || a.is_marked(s);
    std::string name;
    if (options.naming == ObserverNaming::members || empty) {
      name = set_name(a, members);
    } else {
      name = options.prefix + std::to_string(obs.members.size());
    }
    StateId id = obs.automaton.add_state(std::move(name), marked);
    index.emplace(members, id);
    obs.members.push_back(std::move(members));
    if (empty) obs.empty_state = id;
    return {id, true};
  };

  std::deque<StateId> queue;
  obs.automaton.set_initial(intern(unobservable_reach(a, a.initial(), mask)).first);
  queue.push_back(obs.automaton.initial());

  std::vector<StateId> successors;
  while (!queue.empty()) {
    const StateId x = queue.front();
    queue.pop_front();
    if (obs.members[x].empty()) continue;
    for (EventId e = 0; e < alphabet.size(); ++e) {
      if (!mask[e]) {
        obs.automaton.add_transition(x, e, x);
        continue;
      }
      successors.clear();
      for (StateId s : obs.members[x]) {
        for (const Edge& edge : a.successors(s, e)) successors.push_back(edge.target);
      }
      if (successors.empty() && !options.materialize_empty) continue;
      auto [y, fresh] = intern(unobservable_reach(a, successors, mask));
      obs.automaton.add_transition(x, e, y);
      if (fresh) queue.push_back(y);
    }
  }
  return obs;
}

Automaton subset_construction(const Automaton& a, const EventSet& observed) {
  return build_observer(a, observed).automaton;
}

Automaton project(const Automaton& a, const EventSet& observed) {
  Automaton obs = subset_construction(a, observed);
  EventSet kept;
  for (const auto& e : obs.alphabet()) {
    if (observed.contains(e)) kept.insert(e);
  }
  Automaton out(a.name(), Alphabet(kept));
  for (StateId s = 0; s < obs.state_count(); ++s) out.add_state(obs.state_name(s), obs.is_marked(s));
  out.set_initial(obs.initial());
  for (StateId s = 0; s < obs.state_count(); ++s) {
    for (const Edge& e : obs.edges(s)) {
      const auto& label = obs.alphabet()[e.event];
      if (observed.contains(label)) out.add_transition(s, *out.alphabet().find(label), e.target);
    }
  }
  return out;
}

Product compose(std::span<const Automaton* const> parts, const ProductOptions& options) {
  if (parts.empty()) throw ValidationError("compose needs at least one automaton");
  std::vector<EventLabel> all;
  std::string joined;
  for (const Automaton* p : parts) {
    require_initial(*p);
    all.insert(all.end(), p->alphabet().begin(), p->alphabet().end());
    if (!joined.empty()) joined += "||";
    joined += p->name();
  }
  Alphabet alphabet(std::move(all));
  const std::size_t n = parts.size();

  // local[i][e] is part i's id for union event e, or kNoEvent.
  std::vector<std::vector<EventId>> local(n, std::vector<EventId>(alphabet.size(), kNoEvent));
  for (std::size_t i = 0; i < n; ++i) {
    for (EventId e = 0; e < alphabet.size(); ++e) {
      if (auto id = parts[i]->alphabet().find(alphabet[e])) local[i][e] = *id;
    }
  }

  Product prod;
  prod.automaton = Automaton(options.name.empty() ? joined : options.name, alphabet);
  std::unordered_map<std::vector<StateId>, StateId, VectorHash> index;

  auto intern = [&](const std::vector<StateId>& tuple) -> std::pair<StateId, bool> {
    auto it = index.find(tuple);
    if (it != index.end()) return {it->second, false};
    bool marked = true;
    for (std::size_t i = 0; i < n; ++i) marked = marked && parts[i]->is_marked(tuple[i]);
    std::string name;
    if (options.naming == ProductNaming::tuple) {
      name = "(";
      for (std::size_t i = 0; i < n; ++i) {
        if (i) name += ',';
        name += parts[i]->state_name(tuple[i]);
      }
      name += ')';
    } else {
      name = options.prefix + std::to_string(prod.components.size());
    }
    StateId id = prod.automaton.add_state(std::move(name), marked);
    index.emplace(tuple, id);
    prod.components.push_back(tuple);
    return {id, true};
  };

  std::vector<StateId> init(n);
  for (std::size_t i = 0; i < n; ++i) init[i] = parts[i]->initial();
  prod.automaton.set_initial(intern(init).first);
  std::deque<StateId> queue{prod.automaton.initial()};

  std::vector<std::span<const Edge>> choices(n);
  std::vector<std::size_t> cursor(n);
  std::vector<StateId> next(n);
  while (!queue.empty()) {
    const StateId p = queue.front();
    queue.pop_front();
    const std::vector<StateId> tuple = prod.components[p];
    for (EventId e = 0; e < alphabet.size(); ++e) {
      bool defined = true;
      for (std::size_t i = 0; i < n && defined; ++i) {
        if (local[i][e] == kNoEvent) {
          choices[i] = {};
          continue;
        }
        choices[i] = parts[i]->successors(tuple[i], local[i][e]);
        defined = !choices[i].empty();
      }
      if (!defined) continue;
      // Enumerate the cartesian product of nondeterministic choices.
      std::fill(cursor.begin(), cursor.end(), 0);
      while (true) {
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = local[i][e] == kNoEvent ? tuple[i] : choices[i][cursor[i]].target;
        }
        auto [q, fresh] = intern(next);
        prod.automaton.add_transition(p, e, q);
        if (fresh) queue.push_back(q);
        std::size_t i = 0;
        for (; i < n; ++i) {
          if (local[i][e] == kNoEvent) continue;
          if (++cursor[i] < choices[i].size()) break;
          cursor[i] = 0;
        }
        if (i == n) break;
      }
    }
  }
  return prod;
}

Product compose(std::initializer_list<const Automaton*> parts, const ProductOptions& options) {
  return compose(std::span<const Automaton* const>(parts.begin(), parts.size()), options);
}

Automaton synchronous_product(const Automaton& a1, const Automaton& a2) {
  return compose({&a1, &a2}).automaton;
}

StateSet reachable(const Automaton& a) {
  StateSet out;
  if (!a.has_initial()) return out;
  std::vector<char> seen(a.state_count(), 0);
  std::vector<StateId> stack{a.initial()};
  seen[a.initial()] = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (const Edge& e : a.edges(s)) {
      if (!seen[e.target]) {
        seen[e.target] = 1;
        stack.push_back(e.target);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<char> coreachable_to(const Automaton& a, const std::vector<char>& target) {
  const std::size_t n = a.state_count();
  std::vector<std::vector<StateId>> preds(n);
  for (StateId s = 0; s < n; ++s) {
    for (const Edge& e : a.edges(s)) preds[e.target].push_back(s);
  }
  std::vector<char> seen(n, 0);
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s) {
    if (target[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : preds[s]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

StateSet coreachable(const Automaton& a) {
  std::vector<char> target(a.state_count(), 0);
  for (StateId s : a.marked_states()) target[s] = 1;
  auto seen = coreachable_to(a, target);
  StateSet out;
  for (StateId s = 0; s < seen.size(); ++s) {
    if (seen[s]) out.push_back(s);
  }
  return out;
}

Automaton restrict_states(const Automaton& a, const std::vector<char>& keep) {
  Automaton out(a.name(), a.alphabet());
  std::vector<StateId> remap(a.state_count(), kNoState);
  for (StateId s = 0; s < a.state_count(); ++s) {
    if (keep[s]) remap[s] = out.add_state(a.state_name(s), a.is_marked(s));
  }
  for (StateId s = 0; s < a.state_count(); ++s) {
    if (!keep[s]) continue;
    for (const Edge& e : a.edges(s)) {
      if (keep[e.target]) out.add_transition(remap[s], e.event, remap[e.target]);
    }
  }
  if (a.has_initial() && remap[a.initial()] != kNoState) out.set_initial(remap[a.initial()]);
  return out;
}

Automaton trim(const Automaton& a) {
  std::vector<char> keep(a.state_count(), 0);
  auto co = coreachable(a);
  std::vector<char> co_mask(a.state_count(), 0);
  for (StateId s : co) co_mask[s] = 1;
  for (StateId s : reachable(a)) keep[s] = co_mask[s];
  return restrict_states(a, keep);
}

bool is_nonblocking(const Automaton& a) {
  auto co = coreachable(a);
  std::vector<char> co_mask(a.state_count(), 0);
  for (StateId s : co) co_mask[s] = 1;
  for (StateId s : reachable(a)) {
    if (!co_mask[s]) return false;
  }
  return true;
}

bool accepts(const Automaton& a, std::span<const EventLabel> word, Acceptance mode) {
  std::vector<EventId> ids;
  ids.reserve(word.size());
  for (const auto& e : word) ids.push_back(a.event_id(e));
  if (!a.has_initial()) return false;
  StateSet current{a.initial()};
  StateSet next;
  for (EventId e : ids) {
    next.clear();
    for (StateId s : current) {
      for (const Edge& edge : a.successors(s, e)) next.push_back(edge.target);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current.swap(next);
    if (current.empty()) return false;
  }
  if (mode == Acceptance::closed) return true;
  return std::any_of(current.begin(), current.end(), [&](StateId s) { return a.is_marked(s); });
}

std::optional<std::vector<EventLabel>> shortest_path(const Automaton& a, const std::function<bool(StateId)>& goal) {
  if (!a.has_initial()) return std::nullopt;
  std::vector<StateId> parent(a.state_count(), kNoState);
  std::vector<EventId> via(a.state_count(), kNoEvent);
  std::vector<char> seen(a.state_count(), 0);
  std::deque<StateId> queue{a.initial()};
  seen[a.initial()] = 1;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (goal(s)) {
      std::vector<EventLabel> path;
      for (StateId t = s; t != a.initial(); t = parent[t]) path.push_back(a.alphabet()[via[t]]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const Edge& e : a.edges(s)) {
      if (!seen[e.target]) {
        seen[e.target] = 1;
        parent[e.target] = s;
        via[e.target] = e.event;
        queue.push_back(e.target);
      }
    }
  }
  return std::nullopt;
}

bool language_included(const Automaton& a, const Automaton& b, std::optional<std::size_t> max_depth,
                       std::vector<EventLabel>* counterexample) {
  if (!(a.alphabet() == b.alphabet())) throw ValidationError("language inclusion needs equal alphabets");
  if (!a.has_initial()) return true;
  if (!b.has_initial()) {
    if (counterexample) counterexample->clear();
    return false;
  }
  struct Node {
    StateId sa;
    StateSet sb;
    std::size_t parent;
    EventId via;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::map<std::pair<StateId, StateSet>, std::size_t> seen;
  nodes.push_back({a.initial(), {b.initial()}, 0, kNoEvent, 0});
  seen.emplace(std::make_pair(a.initial(), StateSet{b.initial()}), 0);
  auto witness = [&](std::size_t k, EventId last) {
    if (!counterexample) return;
    counterexample->clear();
    counterexample->push_back(a.alphabet()[last]);
    for (std::size_t i = k; i != 0; i = nodes[i].parent) counterexample->push_back(a.alphabet()[nodes[i].via]);
    std::reverse(counterexample->begin(), counterexample->end());
  };
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (max_depth && nodes[k].depth >= *max_depth) continue;
    for (const Edge& e : a.edges(nodes[k].sa)) {
      StateSet next;
      for (StateId s : nodes[k].sb) {
        for (const Edge& f : b.successors(s, e.event)) next.push_back(f.target);
      }
      if (next.empty()) {
        witness(k, e.event);
        return false;
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      auto key = std::make_pair(e.target, next);
      if (seen.contains(key)) continue;
      seen.emplace(key, nodes.size());
      nodes.push_back({e.target, std::move(next), k, e.event, nodes[k].depth + 1});
    }
  }
  return true;
}

bool is_isomorphism(const Automaton& a, const Automaton& b, const std::vector<StateId>& mapping) {
  if (a.state_count() != b.state_count() || mapping.size() != a.state_count()) return false;
  if (a.alphabet().to_set() != b.alphabet().to_set()) return false;
  std::vector<char> hit(b.state_count(), 0);
  for (StateId m : mapping) {
    if (m >= b.state_count() || hit[m]) return false;
    hit[m] = 1;
  }
  if (a.has_initial() != b.has_initial()) return false;
  if (a.has_initial() && mapping[a.initial()] != b.initial()) return false;
  for (StateId s = 0; s < a.state_count(); ++s) {
    if (a.is_marked(s) != b.is_marked(mapping[s])) return false;
    auto ea = a.edges(s);
    auto eb = b.edges(mapping[s]);
    if (ea.size() != eb.size()) return false;
    std::vector<Edge> translated;
    translated.reserve(ea.size());
    for (const Edge& e : ea) {
      translated.push_back({*b.alphabet().find(a.alphabet()[e.event]), mapping[e.target]});
    }
    std::sort(translated.begin(), translated.end());
    if (!std::equal(translated.begin(), translated.end(), eb.begin(), eb.end())) return false;
  }
  return true;
}

}  // namespace covsyn
