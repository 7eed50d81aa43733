#include "covsyn/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "covsyn/attacker.hpp"
#include "covsyn/channels.hpp"
#include "covsyn/error.hpp"
#include "covsyn/plant.hpp"
#include "covsyn/supervision.hpp"

namespace covsyn {

std::string_view mode_name(SynthesisMode mode) {
  return mode == SynthesisMode::nonblocking ? "nonblocking" : "reachable";
}

std::optional<SynthesisMode> parse_mode(std::string_view text) {
  if (text == "nonblocking") return SynthesisMode::nonblocking;
  if (text == "reachable") return SynthesisMode::reachable;
  return std::nullopt;
}

namespace {

struct EventClasses {
  std::vector<char> controllable;
  std::vector<char> observed;
};

EventClasses classify(const Automaton& a, const ControlConstraint& c) {
  for (const auto& e : c.controllable) {
    if (!c.observable.contains(e)) {
      throw ValidationError("controllable event '" + e.spelling() + "' must be observable");
    }
  }
  return {event_mask(a, c.controllable), event_mask(a, c.observable)};
}

// Reachable (plant state, observer state) pairs of the closed loop under the
// current fixpoint, with their successor lists.
struct PairGraph {
  std::vector<std::pair<StateId, StateId>> nodes;
  std::vector<std::vector<std::uint32_t>> next;
};

PairGraph pair_graph(const Automaton& plant, const Fixpoint& fp, const EventClasses& cls) {
  PairGraph g;
  const Automaton& obs = fp.observer.automaton;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  auto key = [](StateId p, StateId x) { return (static_cast<std::uint64_t>(x) << 32) | p; };
  auto intern = [&](StateId p, StateId x) {
    auto [it, fresh] = index.emplace(key(p, x), static_cast<std::uint32_t>(g.nodes.size()));
    if (fresh) {
      g.nodes.emplace_back(p, x);
      g.next.emplace_back();
    }
    return it->second;
  };
  const StateId x0 = obs.initial();
  if (!fp.alive[x0]) return g;
  intern(plant.initial(), x0);
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const auto [p, x] = g.nodes[k];
    const auto obs_edges = obs.edges(x);
    for (const Edge& e : plant.edges(p)) {
      StateId y = x;
      if (cls.observed[e.event]) {
        auto it = std::lower_bound(obs_edges.begin(), obs_edges.end(), Edge{e.event, 0});
        if (it == obs_edges.end() || it->event != e.event) {
          throw std::logic_error("observer misses an edge its members enable");
        }
        const std::size_t i = static_cast<std::size_t>(it - obs_edges.begin());
        if (!fp.enabled[x][i] || !fp.alive[it->target]) continue;
        y = it->target;
      }
      const std::uint32_t to = intern(e.target, y);
      g.next[k].push_back(to);
    }
  }
  return g;
}

std::vector<char> pair_coreachable(const PairGraph& g, const std::vector<char>& target) {
  std::vector<std::vector<std::uint32_t>> preds(g.nodes.size());
  for (std::uint32_t k = 0; k < g.nodes.size(); ++k) {
    for (std::uint32_t to : g.next[k]) preds[to].push_back(k);
  }
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t k = 0; k < g.nodes.size(); ++k) {
    if (target[g.nodes[k].first]) {
      seen[k] = 1;
      stack.push_back(k);
    }
  }
  while (!stack.empty()) {
    auto k = stack.back();
    stack.pop_back();
    for (auto p : preds[k]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

class Pruner {
 public:
  Pruner(Fixpoint& fp, const EventClasses& cls) : fp_(fp), cls_(cls) {
    const Automaton& obs = fp.observer.automaton;
    preds_.resize(obs.state_count());
    for (StateId x = 0; x < obs.state_count(); ++x) {
      const auto edges = obs.edges(x);
      for (std::uint32_t i = 0; i < edges.size(); ++i) {
        if (edges[i].target != x) preds_[edges[i].target].emplace_back(x, i);
      }
    }
  }

  void kill(StateId x) {
    if (!fp_.alive[x]) return;
    fp_.alive[x] = 0;
    queue_.push_back(x);
  }

  // Controllable edges into dead states are disabled; uncontrollable ones
  // take their source down too.
  void propagate() {
    const Automaton& obs = fp_.observer.automaton;
    while (!queue_.empty()) {
      const StateId y = queue_.front();
      queue_.pop_front();
      for (const auto& [x, i] : preds_[y]) {
        if (!fp_.alive[x] || !fp_.enabled[x][i]) continue;
        if (cls_.controllable[obs.edges(x)[i].event]) {
          fp_.enabled[x][i] = 0;
        } else {
          kill(x);
        }
      }
    }
  }

 private:
  Fixpoint& fp_;
  const EventClasses& cls_;
  std::vector<std::vector<std::pair<StateId, std::uint32_t>>> preds_;
  std::deque<StateId> queue_;
};

Fixpoint initial_fixpoint(const Automaton& plant, const ControlConstraint& c) {
  Fixpoint fp;
  fp.observer = build_observer(plant, c.observable, {.naming = ObserverNaming::indexed, .prefix = "X"});
  const Automaton& obs = fp.observer.automaton;
  fp.alive.assign(obs.state_count(), 1);
  fp.enabled.resize(obs.state_count());
  for (StateId x = 0; x < obs.state_count(); ++x) fp.enabled[x].assign(obs.edges(x).size(), 1);
  return fp;
}

}  // namespace

SupervisorResult realize_supervisor(const ControlProblem& problem, Fixpoint fp, const SupervisorNaming& naming) {
  SupervisorResult result;
  const Automaton& obs = fp.observer.automaton;
  if (!fp.alive[obs.initial()]) {
    result.fixpoint = std::move(fp);
    return result;
  }
  const auto cls = classify(*problem.plant, problem.constraint);
  Automaton s(naming.name, obs.alphabet());
  std::vector<StateId> remap(obs.state_count(), kNoState);
  std::deque<StateId> queue;
  auto visit = [&](StateId x) {
    if (remap[x] == kNoState) {
      remap[x] = s.add_state(naming.prefix + std::to_string(result.observer_state.size()), true);
      result.observer_state.push_back(x);
      queue.push_back(x);
    }
    return remap[x];
  };
  StateId dump = kNoState;
  auto dump_state = [&]() {
    if (dump == kNoState) {
      dump = s.add_state("{}", true);
      result.observer_state.push_back(kNoState);
    }
    return dump;
  };
  s.set_initial(visit(obs.initial()));
  while (!queue.empty()) {
    const StateId x = queue.front();
    queue.pop_front();
    const auto edges = obs.edges(x);
    std::vector<char> has(obs.alphabet().size(), 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      has[edges[i].event] = 1;
      if (!fp.enabled[x][i] || !fp.alive[edges[i].target]) continue;
      const StateId to = visit(edges[i].target);
      s.add_transition(remap[x], edges[i].event, to);
    }
    for (EventId e = 0; e < obs.alphabet().size(); ++e) {
      if (!has[e] && !cls.controllable[e]) s.add_transition(remap[x], e, dump_state());
    }
  }
  if (dump != kNoState) {
    for (EventId e = 0; e < obs.alphabet().size(); ++e) {
      if (!cls.controllable[e]) s.add_transition(dump, e, dump);
    }
  }
  result.supervisor = std::move(s);
  result.fixpoint = std::move(fp);
  return result;
}

SupervisorResult synthesize_supervisor(const ControlProblem& problem, SynthesisMode mode,
                                       const SupervisorNaming& naming) {
  const Automaton& plant = *problem.plant;
  if (!plant.has_initial()) throw ValidationError("plant has no initial state");
  if (problem.bad.size() != plant.state_count() || problem.target.size() != plant.state_count()) {
    throw ValidationError("bad/target sets do not match the plant");
  }
  const auto cls = classify(plant, problem.constraint);
  Fixpoint fp = initial_fixpoint(plant, problem.constraint);
  Pruner pruner(fp, cls);

  // Deletions are seeded in ascending observer-state order for reproducibility.
  for (StateId x = 0; x < fp.observer.members.size(); ++x) {
    const auto& members = fp.observer.members[x];
    if (std::any_of(members.begin(), members.end(), [&](StateId p) { return problem.bad[p]; })) pruner.kill(x);
  }
  pruner.propagate();
  fp.rounds = 1;

  if (mode == SynthesisMode::nonblocking) {
    while (fp.alive[fp.observer.automaton.initial()]) {
      const PairGraph g = pair_graph(plant, fp, cls);
      const auto co = pair_coreachable(g, problem.target);
      std::vector<StateId> blocking;
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        if (!co[k]) blocking.push_back(g.nodes[k].second);
      }
      if (blocking.empty()) break;
      std::sort(blocking.begin(), blocking.end());
      for (StateId x : blocking) pruner.kill(x);
      pruner.propagate();
      ++fp.rounds;
    }
  } else if (fp.alive[fp.observer.automaton.initial()]) {
    const PairGraph g = pair_graph(plant, fp, cls);
    const bool hit = std::any_of(g.nodes.begin(), g.nodes.end(), [&](const auto& n) { return problem.target[n.first]; });
    if (!hit) pruner.kill(fp.observer.automaton.initial());
  }
  return realize_supervisor(problem, std::move(fp), naming);
}

SynthesisProblem build_problem(const NetworkedPlant& g_new, const Automaton& ac, const Automaton& oc,
                               const Automaton& ns, const Automaton& cc, const Monitor& m, const SystemConfig& cfg) {
  const EventSet alphabet = attack_alphabet(cfg);
  const auto report = validate_networked_supervisor(ns, cfg);
  if (!report.ok()) throw ValidationError("invalid networked supervisor:\n" + report.to_text());
  if (ac.alphabet().to_set() != alphabet) throw ValidationError("attack constraints are not over the attack alphabet");
  for (const Automaton* part : {&g_new.g_new, &oc, &cc, &m.automaton}) {
    for (const auto& e : part->alphabet()) {
      if (!alphabet.contains(e)) {
        throw ValidationError("component '" + part->name() + "' uses event '" + e.spelling() +
                              "' outside the networked alphabet");
      }
    }
  }
  Product prod = compose({&g_new.g_new, &ac, &oc, &ns, &cc, &m.automaton}, {.naming = ProductNaming::tuple, .name = "P"});
  SynthesisProblem p;
  p.plant = std::move(prod.automaton);
  p.components = std::move(prod.components);
  p.alphabet = alphabet;
  p.constraint = attack_control_constraint(cfg);
  const std::size_t n = p.plant.state_count();
  p.bad.assign(n, 0);
  p.target.assign(n, 0);
  for (StateId s = 0; s < n; ++s) {
    const bool damage = g_new.is_damage(p.components[s][0]);
    p.target[s] = damage;
    p.bad[s] = !damage && m.detection != kNoState && p.components[s][5] == m.detection;
  }
  // Marking of P follows the target set only.
  for (StateId s = 0; s < n; ++s) p.plant.set_marked(s, p.target[s] != 0);
  return p;
}

SupervisorResult synthesize_supremal_attack(const SynthesisProblem& p, SynthesisMode mode) {
  return synthesize_supervisor(p.control(), mode, {.name = "A", .prefix = "A"});
}

Product closed_loop(const SynthesisProblem& p, const Automaton& a) {
  if (a.alphabet().to_set() != p.alphabet) throw ValidationError("attack is not over the attack alphabet");
  return compose({&p.plant, &a}, {.naming = ProductNaming::indexed, .prefix = "B", .name = "B"});
}

CheckResult verify_covert(const SynthesisProblem& p, const Automaton& a) {
  const Product b = closed_loop(p, a);
  CheckResult r;
  auto path = shortest_path(b.automaton, [&](StateId s) { return p.bad[b.components[s][0]] != 0; });
  r.holds = !path;
  if (path) {
    r.witness = std::move(*path);
    r.has_witness = true;
  }
  return r;
}

CheckResult verify_damage_nonblocking(const SynthesisProblem& p, const Automaton& a) {
  const Product b = closed_loop(p, a);
  std::vector<char> target(b.automaton.state_count(), 0);
  for (StateId s = 0; s < target.size(); ++s) target[s] = p.target[b.components[s][0]];
  const auto co = coreachable_to(b.automaton, target);
  CheckResult r;
  auto path = shortest_path(b.automaton, [&](StateId s) { return !co[s]; });
  r.holds = !path;
  if (path) {
    r.witness = std::move(*path);
    r.has_witness = true;
  }
  return r;
}

CheckResult verify_damage_reachable(const SynthesisProblem& p, const Automaton& a) {
  const Product b = closed_loop(p, a);
  CheckResult r;
  auto path = shortest_path(b.automaton, [&](StateId s) { return p.target[b.components[s][0]] != 0; });
  r.holds = path.has_value();
  if (path) {
    r.witness = std::move(*path);
    r.has_witness = true;
  }
  return r;
}

std::optional<Automaton> extend_attack(const SynthesisProblem& p, const SupervisorResult& result, StateId state,
                                       const EventLabel& event) {
  if (!result.supervisor) return std::nullopt;
  if (state >= result.observer_state.size()) throw ValidationError("attack state out of range");
  const StateId x = result.observer_state[state];
  if (x == kNoState) return std::nullopt;
  Fixpoint fp = result.fixpoint;
  const Automaton& obs = fp.observer.automaton;
  const auto edges = obs.edges(x);
  const EventId e = obs.event_id(event);
  auto it = std::lower_bound(edges.begin(), edges.end(), Edge{e, 0});
  if (it == edges.end() || it->event != e) return std::nullopt;
  fp.enabled[x][static_cast<std::size_t>(it - edges.begin())] = 1;
  if (!fp.alive[it->target]) {
    std::vector<StateId> stack{it->target};
    fp.alive[it->target] = 1;
    while (!stack.empty()) {
      const StateId y = stack.back();
      stack.pop_back();
      std::fill(fp.enabled[y].begin(), fp.enabled[y].end(), 1);
      for (const Edge& f : obs.edges(y)) {
        if (!fp.alive[f.target]) {
          fp.alive[f.target] = 1;
          stack.push_back(f.target);
        }
      }
    }
  }
  auto extended = realize_supervisor(p.control(), std::move(fp), {.name = "A", .prefix = "A"});
  return std::move(extended.supervisor);
}

LocalMaximality check_local_maximality(const SynthesisProblem& p, const SupervisorResult& result,
                                       SynthesisMode mode) {
  LocalMaximality out;
  if (!result.supervisor) return out;
  const Automaton& a = *result.supervisor;
  for (StateId s = 0; s < a.state_count(); ++s) {
    const StateId x = result.observer_state[s];
    if (x == kNoState) continue;
    for (const auto& e : p.constraint.controllable) {
      const EventId id = a.event_id(e);
      if (a.enabled(s, id)) continue;
      auto extended = extend_attack(p, result, s, e);
      if (!extended) continue;  // the plant cannot produce e here
      ++out.edits;
      const bool covert = verify_covert(p, *extended).holds;
      const bool contract = mode == SynthesisMode::nonblocking ? verify_damage_nonblocking(p, *extended).holds
                                                               : verify_damage_reachable(p, *extended).holds;
      if (covert && contract) out.counterexamples.push_back("(" + a.state_name(s) + ", " + e.spelling() + ")");
    }
  }
  return out;
}

namespace {

std::string pow2_text(std::uint64_t exponent) { return "2^" + std::to_string(exponent); }

}  // namespace

std::vector<SizeLine> state_size_report(const SystemConfig& cfg, const SizeInputs& in) {
  std::vector<SizeLine> lines;
  const std::uint64_t gamma = cfg.gamma().size();
  if (in.ac) {
    const std::uint64_t bound =
        static_cast<std::uint64_t>(cfg.rates.u) + 2 + names_minus(cfg.sigma_o(), cfg.sigma_sa()).size();
    lines.push_back({"AC", in.ac->state_count(), std::to_string(bound), true, in.ac->state_count() == bound});
  }
  if (in.oc_full) {
    const auto bound = enumerate_channel_states(cfg.sigma_o().size(), cfg.delta_o,
                                                capacity_observation(cfg.rates.n_f, cfg.rates.u, cfg.delta_o));
    lines.push_back({"OC", in.oc_full->state_count(), std::to_string(bound), true, in.oc_full->state_count() == bound});
  }
  if (in.cc_full) {
    const auto bound = enumerate_channel_states(
        gamma, cfg.delta_c, capacity_control(cfg.rates.n_f, cfg.rates.u, cfg.rates.v, cfg.delta_o, cfg.delta_c));
    lines.push_back({"CC", in.cc_full->state_count(), std::to_string(bound), true, in.cc_full->state_count() == bound});
  }
  if (in.cs) {
    const auto bound = enumerate_channel_states(
        gamma, cfg.delta_s,
        capacity_storage(cfg.rates.n_f, cfg.rates.u, cfg.rates.v, cfg.delta_o, cfg.delta_c, cfg.delta_s));
    lines.push_back({"CS", in.cs->state_count(), std::to_string(bound), false, in.cs->state_count() <= bound});
  }
  if (in.ce) {
    // The closed form counts the states besides the idle one.
    const std::uint64_t bound = gamma * (1 + static_cast<std::uint64_t>(cfg.max_exec_delay()));
    const std::uint64_t count = in.ce->state_count() - 1;
    lines.push_back({"CE (non-idle)", count, std::to_string(bound), false, count <= bound});
  }
  if (in.m && in.monitor_product_states) {
    const std::uint64_t count = in.m->state_count();
    const bool ok = in.monitor_product_states >= 64 || count <= (std::uint64_t{1} << in.monitor_product_states);
    lines.push_back({"M", count, pow2_text(in.monitor_product_states), false, ok});
  }
  return lines;
}

std::string format_size_report(const std::vector<SizeLine>& lines) {
  std::ostringstream out;
  for (const auto& l : lines) {
    out << l.component << ": states=" << l.count << (l.exact ? " expected=" : " bound=") << l.bound
        << (l.ok ? " ok" : " VIOLATED") << '\n';
  }
  return out.str();
}

}  // namespace covsyn
