#include "covsyn/plant.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <set>

#include "covsyn/error.hpp"
#include "covsyn/operations.hpp"
#include "covsyn/text_format.hpp"

namespace covsyn {

namespace {

using Pairs = std::vector<std::pair<std::string, int>>;

std::string pair_text(const std::pair<std::string, int>& p) {
  return "(" + p.first + "," + std::to_string(p.second) + ")";
}

// Parses "(x,n)" starting at `pos`; advances past it.
std::pair<std::string, int> parse_pair(std::string_view text, std::size_t& pos, std::string_view whole) {
  auto fail = [&]() { return ParseError("malformed state '" + std::string(whole) + "'", 0); };
  if (pos >= text.size() || text[pos] != '(') throw fail();
  auto comma = text.find(',', pos);
  if (comma == std::string_view::npos) throw fail();
  std::string name(text.substr(pos + 1, comma - pos - 1));
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + comma + 1, text.data() + text.size(), value);
  if (ec != std::errc()) throw fail();
  pos = static_cast<std::size_t>(ptr - text.data());
  if (pos >= text.size() || text[pos] != ')') throw fail();
  ++pos;
  return {std::move(name), value};
}

std::set<std::string> enabled_plant_events(const Automaton& g, StateId q) {
  std::set<std::string> out;
  for (const Edge& e : g.edges(q)) out.insert(g.alphabet()[e.event].base());
  return out;
}

}  // namespace

int capacity_storage(int n_f, int u, int v, int delta_o, int delta_c, int delta_s) {
  return n_f * u * v * (delta_o + delta_c + delta_s + 1) + v * (delta_c + delta_s + 1);
}

std::string storage_state_name(const StorageState& q) {
  if (q.empty()) return "ε";
  std::string out;
  for (const auto& p : q) out += pair_text(p);
  return out;
}

StorageState parse_storage_state(std::string_view name) {
  if (name == "ε") return {};
  StorageState q;
  std::size_t pos = 0;
  while (pos < name.size()) q.push_back(parse_pair(name, pos, name));
  if (q.empty()) throw ParseError("malformed storage state '" + std::string(name) + "'", 0);
  return q;
}

std::string execution_state_name(const ExecutionState& q) {
  std::string out = "{";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += ',';
    out += pair_text(q[i]);
  }
  return out + "}";
}

ExecutionState parse_execution_state(std::string_view name) {
  auto fail = [&]() { return ParseError("malformed execution state '" + std::string(name) + "'", 0); };
  if (name.size() < 2 || name.front() != '{' || name.back() != '}') throw fail();
  auto body = name.substr(1, name.size() - 2);
  ExecutionState q;
  std::size_t pos = 0;
  while (pos < body.size()) {
    q.push_back(parse_pair(body, pos, name));
    if (pos < body.size()) {
      if (body[pos] != ',') throw fail();
      ++pos;
    }
  }
  return q;
}

StorageState storage_tick(const StorageState& q) {
  StorageState out;
  for (const auto& [cmd, t] : q) {
    if (t > 0) out.emplace_back(cmd, t - 1);
  }
  return out;
}

StorageState storage_remove(const StorageState& q, const std::string& command) {
  StorageState out = q;
  auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == command; });
  if (it != out.end()) out.erase(it);
  return out;
}

Automaton build_command_storage(const SystemConfig& cfg) {
  validate_config(cfg);
  const auto gamma = cfg.gamma();
  const int capacity = capacity_storage(cfg.rates.n_f, cfg.rates.u, cfg.rates.v, cfg.delta_o, cfg.delta_c, cfg.delta_s);
  EventSet alphabet = set_union(labels(Role::command_out, gamma), labels(Role::command, gamma));
  alphabet.insert(EventLabel::tick());
  Automaton a("CS", Alphabet(alphabet));
  const EventId tick = a.event_id(EventLabel::tick());

  std::map<StorageState, StateId> index;
  std::vector<StorageState> states;
  std::deque<StateId> queue;
  auto intern = [&](const StorageState& q) {
    auto it = index.find(q);
    if (it != index.end()) return it->second;
    StateId id = a.add_state(storage_state_name(q));
    index.emplace(q, id);
    states.push_back(q);
    queue.push_back(id);
    return id;
  };
  a.set_initial(intern({}));
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    const StorageState q = states[s];
    a.add_transition(s, tick, intern(storage_tick(q)));
    for (const auto& g : gamma) {
      if (static_cast<int>(q.size()) < capacity) {
        StorageState next = q;
        next.emplace_back(g, cfg.delta_s);
        a.add_transition(s, a.event_id(EventLabel::command_out(g)), intern(next));
      }
      if (std::any_of(q.begin(), q.end(), [&](const auto& p) { return p.first == g; })) {
        a.add_transition(s, a.event_id(EventLabel::command(g)), intern(storage_remove(q, g)));
      }
    }
  }
  return a;
}

Automaton build_command_execution(const SystemConfig& cfg) {
  validate_config(cfg);
  const auto gamma = cfg.gamma();
  EventSet alphabet = set_union(labels(Role::command, gamma), labels(Role::plain, cfg.sigma()));
  alphabet.insert(EventLabel::tick());
  Automaton a("CE", Alphabet(alphabet));
  const EventId tick = a.event_id(EventLabel::tick());
  std::vector<EventId> uncontrollable;
  for (const auto& u : cfg.sigma_uc()) uncontrollable.push_back(a.event_id(EventLabel::plain(u)));

  std::map<ExecutionState, StateId> index;
  std::vector<ExecutionState> states;
  std::deque<StateId> queue;
  auto intern = [&](const ExecutionState& q) {
    auto it = index.find(q);
    if (it != index.end()) return it->second;
    StateId id = a.add_state(execution_state_name(q));
    index.emplace(q, id);
    states.push_back(q);
    queue.push_back(id);
    return id;
  };
  const StateId idle = intern({});
  a.set_initial(idle);
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    const ExecutionState q = states[s];
    for (EventId u : uncontrollable) a.add_transition(s, u, idle);
    if (q.empty()) {
      a.add_transition(s, tick, s);
      for (const auto& g : gamma) {
        ExecutionState num;
        for (const auto& e : cfg.commands.at(g)) num.emplace_back(e, *cfg.event(e).exec_delay);
        a.add_transition(s, a.event_id(EventLabel::command(g)), intern(num));
      }
      continue;
    }
    if (std::any_of(q.begin(), q.end(), [](const auto& p) { return p.second > 0; })) {
      ExecutionState next = q;
      for (auto& p : next) --p.second;
      a.add_transition(s, tick, intern(next));
    }
    for (const auto& [e, t] : q) {
      if (t == 0) a.add_transition(s, a.event_id(EventLabel::plain(e)), idle);
    }
  }
  return a;
}

void check_plant(const Automaton& g, const SystemConfig& cfg) {
  const EventSet sigma = labels(Role::plain, cfg.sigma());
  for (const auto& e : g.alphabet()) {
    if (!sigma.contains(e)) throw ValidationError("plant event '" + e.spelling() + "' is not declared in the config");
  }
  for (const auto& d : cfg.damage) {
    if (!g.find_state(d)) throw ValidationError("damage state '" + d + "' is not a plant state");
  }
  if (!g.has_initial()) throw ValidationError("plant has no initial state");
}

Automaton load_plant(const std::string& path, const SystemConfig& cfg) {
  Automaton g = read_automaton_file(path);
  check_plant(g, cfg);
  // Widen the alphabet to all of Σ so events the plant never fires are still
  // blocked in compositions.
  const EventSet sigma = labels(Role::plain, cfg.sigma());
  if (g.alphabet().to_set() == sigma) return g;
  Automaton wide(g.name(), Alphabet(sigma));
  for (StateId s = 0; s < g.state_count(); ++s) wide.add_state(g.state_name(s), g.is_marked(s));
  wide.set_initial(g.initial());
  for (StateId s = 0; s < g.state_count(); ++s) {
    for (const Edge& e : g.edges(s)) wide.add_transition(s, g.alphabet()[e.event], e.target);
  }
  return wide;
}

NetworkedPlant compose_and_prune_plant(const Automaton& cs, const Automaton& ce, const Automaton& g,
                                       const SystemConfig& cfg) {
  check_plant(g, cfg);
  if (g.alphabet().to_set() != labels(Role::plain, cfg.sigma())) {
    throw ValidationError("plant alphabet must equal the declared plant events");
  }
  Product temp = compose({&cs, &ce, &g}, {.naming = ProductNaming::tuple, .name = "G_new"});
  const Automaton& t = temp.automaton;
  const EventId tick = t.event_id(EventLabel::tick());

  std::vector<StorageState> storage(cs.state_count());
  for (StateId s = 0; s < cs.state_count(); ++s) storage[s] = parse_storage_state(cs.state_name(s));
  std::vector<ExecutionState> execution(ce.state_count());
  for (StateId s = 0; s < ce.state_count(); ++s) execution[s] = parse_execution_state(ce.state_name(s));
  std::vector<std::set<std::string>> enabled(g.state_count());
  for (StateId s = 0; s < g.state_count(); ++s) enabled[s] = enabled_plant_events(g, s);

  std::vector<char> keep(t.state_count(), 1);
  std::vector<char> preempt(t.state_count(), 0);
  for (StateId p = 0; p < t.state_count(); ++p) {
    const auto& comp = temp.components[p];
    const auto& en = enabled[comp[2]];
    const auto& active = execution[comp[1]];
    if (!active.empty()) {
      keep[p] = std::any_of(active.begin(), active.end(), [&](const auto& x) { return en.contains(x.first); });
      continue;
    }
    for (const auto& [cmd, _] : storage[comp[0]]) {
      const auto& members = cfg.commands.at(cmd);
      if (std::any_of(members.begin(), members.end(), [&](const auto& e) { return en.contains(e); })) {
        preempt[p] = 1;
        break;
      }
    }
  }

  Automaton pruned("G_new", t.alphabet());
  std::vector<StateId> remap(t.state_count(), kNoState);
  std::deque<StateId> queue;
  std::vector<StateId> origin;
  if (!keep[t.initial()]) throw ValidationError("initial networked plant state is pruned");
  auto visit = [&](StateId p) {
    if (remap[p] == kNoState) {
      remap[p] = pruned.add_state(t.state_name(p));
      origin.push_back(p);
      queue.push_back(p);
    }
    return remap[p];
  };
  pruned.set_initial(visit(t.initial()));
  while (!queue.empty()) {
    const StateId p = queue.front();
    queue.pop_front();
    for (const Edge& e : t.edges(p)) {
      if (!keep[e.target]) continue;
      if (e.event == tick && preempt[p]) continue;
      const StateId to = visit(e.target);
      pruned.add_transition(remap[p], e.event, to);
    }
  }

  NetworkedPlant out;
  out.cs = cs;
  out.ce = ce;
  out.g = g;
  out.g_new = std::move(pruned);
  for (StateId p : origin) {
    out.cs_of.push_back(temp.components[p][0]);
    out.ce_of.push_back(temp.components[p][1]);
    out.g_of.push_back(temp.components[p][2]);
  }
  out.damage.assign(g.state_count(), 0);
  for (const auto& d : cfg.damage) out.damage[g.state(d)] = 1;
  return out;
}

NetworkedPlant build_networked_plant(const Automaton& g, const SystemConfig& cfg) {
  return compose_and_prune_plant(build_command_storage(cfg), build_command_execution(cfg), g, cfg);
}

std::vector<std::string> check_networked_plant(const NetworkedPlant& plant, const SystemConfig& cfg) {
  std::vector<std::string> issues;
  const Automaton& a = plant.g_new;
  const EventId tick = a.event_id(EventLabel::tick());
  const auto uncontrollable = cfg.sigma_uc();
  for (StateId s : reachable(a)) {
    const auto storage = parse_storage_state(plant.cs.state_name(plant.cs_of[s]));
    const auto active = parse_execution_state(plant.ce.state_name(plant.ce_of[s]));
    const auto en = enabled_plant_events(plant.g, plant.g_of[s]);
    const std::string& name = a.state_name(s);
    if (!active.empty() &&
        std::none_of(active.begin(), active.end(), [&](const auto& x) { return en.contains(x.first); })) {
      issues.push_back(name + ": active command shares no event with the plant");
    }
    if (active.empty() && a.enabled(s, tick)) {
      for (const auto& [cmd, _] : storage) {
        const auto& members = cfg.commands.at(cmd);
        if (std::any_of(members.begin(), members.end(), [&](const auto& e) { return en.contains(e); })) {
          issues.push_back(name + ": tick enabled although stored command " + cmd + " is usable");
          break;
        }
      }
    }
    for (const Edge& e : a.edges(s)) {
      const auto& label = a.alphabet()[e.event];
      if (label.role() != Role::command) continue;
      const auto expected = storage_remove(storage, label.base());
      if (parse_storage_state(plant.cs.state_name(plant.cs_of[e.target])) != expected) {
        issues.push_back(name + ": fetching " + label.base() + " does not remove the earliest entry");
      }
    }
    for (const auto& u : uncontrollable) {
      if (en.contains(u) && !a.enabled(s, a.event_id(EventLabel::plain(u)))) {
        issues.push_back(name + ": uncontrollable " + u + " is blocked");
      }
    }
  }
  return issues;
}

namespace {

// Topological order of the non-tick subgraph; empty optional on a cycle.
std::optional<std::vector<StateId>> non_tick_order(const Automaton& a, StateId* on_cycle) {
  const EventId tick = a.alphabet().find(EventLabel::tick()).value_or(kNoEvent);
  std::vector<int> indegree(a.state_count(), 0);
  for (StateId s = 0; s < a.state_count(); ++s) {
    for (const Edge& e : a.edges(s)) {
      if (e.event != tick) ++indegree[e.target];
    }
  }
  std::vector<StateId> order, stack;
  for (StateId s = 0; s < a.state_count(); ++s) {
    if (indegree[s] == 0) stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    order.push_back(s);
    for (const Edge& e : a.edges(s)) {
      if (e.event != tick && --indegree[e.target] == 0) stack.push_back(e.target);
    }
  }
  if (order.size() == a.state_count()) return order;
  if (on_cycle) {
    for (StateId s = 0; s < a.state_count(); ++s) {
      if (indegree[s] > 0) {
        *on_cycle = s;
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

void check_activity_loop_free(const Automaton& g_new) {
  StateId witness = kNoState;
  if (!non_tick_order(g_new, &witness)) {
    throw ValidationError("networked plant has a cycle without tick through state '" + g_new.state_name(witness) +
                          "'");
  }
}

int max_events_per_tick(const Automaton& g_new) {
  auto order = non_tick_order(g_new, nullptr);
  if (!order) throw ValidationError("networked plant is not activity-loop-free");
  const EventId tick = g_new.alphabet().find(EventLabel::tick()).value_or(kNoEvent);
  // Longest path counting plant events, processed in reverse topological order.
  std::vector<int> longest(g_new.state_count(), 0);
  int best = 0;
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    int here = 0;
    for (const Edge& e : g_new.edges(*it)) {
      if (e.event == tick) continue;
      const int step = g_new.alphabet()[e.event].role() == Role::plain ? 1 : 0;
      here = std::max(here, step + longest[e.target]);
    }
    longest[*it] = here;
    best = std::max(best, here);
  }
  return best;
}

}  // namespace covsyn
