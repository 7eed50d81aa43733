#include "covsyn/channels.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>

#include "covsyn/error.hpp"

namespace covsyn {

int capacity_observation(int n_f, int u, int delta_o) { return n_f * u * (delta_o + 1); }

int capacity_control(int n_f, int u, int v, int delta_o, int delta_c) {
  return n_f * u * v * (delta_o + delta_c + 1) + v * (delta_c + 1);
}

int ChannelState::size() const noexcept {
  int n = 0;
  for (const auto& e : entries_) n += e.count;
  return n;
}

bool ChannelState::tick_enabled() const noexcept {
  return std::none_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.delay == 0; });
}

ChannelState ChannelState::tick() const {
  ChannelState out;
  for (const auto& e : entries_) {
    if (e.delay > 0) out.entries_.push_back({e.message, e.delay - 1, e.count});
  }
  return out;
}

ChannelState ChannelState::add(const std::string& message, int delay) const {
  ChannelState out = *this;
  auto it = std::find_if(out.entries_.begin(), out.entries_.end(),
                         [&](const Entry& e) { return e.message == message && e.delay == delay; });
  if (it != out.entries_.end()) {
    ++it->count;
  } else {
    Entry fresh{message, delay, 1};
    auto pos = std::lower_bound(out.entries_.begin(), out.entries_.end(), fresh,
                                [](const Entry& a, const Entry& b) {
                                  return std::tie(a.message, a.delay) < std::tie(b.message, b.delay);
                                });
    out.entries_.insert(pos, std::move(fresh));
  }
  return out;
}

ChannelState ChannelState::remove(const std::string& message, int delay) const {
  ChannelState out = *this;
  auto it = std::find_if(out.entries_.begin(), out.entries_.end(),
                         [&](const Entry& e) { return e.message == message && e.delay == delay; });
  if (it == out.entries_.end()) throw ValidationError("channel holds no (" + message + "," + std::to_string(delay) + ")");
  if (--it->count == 0) out.entries_.erase(it);
  return out;
}

std::vector<int> ChannelState::delays_of(const std::string& message) const {
  std::vector<int> out;
  for (const auto& e : entries_) {
    if (e.message == message) out.push_back(e.delay);
  }
  return out;
}

std::string ChannelState::name() const {
  std::string out = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ',';
    out += "(" + entries_[i].message + "," + std::to_string(entries_[i].delay) + ")";
    if (entries_[i].count > 1) out += "^" + std::to_string(entries_[i].count);
  }
  out += "}";
  return out;
}

ChannelState parse_channel_state(std::string_view text) {
  auto fail = [&]() { return ParseError("malformed channel state '" + std::string(text) + "'", 0); };
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') throw fail();
  ChannelState q;
  std::string_view body = text.substr(1, text.size() - 2);
  std::size_t i = 0;
  auto number = [&](std::size_t& pos) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(body.data() + pos, body.data() + body.size(), v);
    if (ec != std::errc() || v < 0) throw fail();
    pos = static_cast<std::size_t>(ptr - body.data());
    return v;
  };
  while (i < body.size()) {
    if (body[i] != '(') throw fail();
    auto comma = body.find(',', i);
    if (comma == std::string_view::npos) throw fail();
    std::string message(body.substr(i + 1, comma - i - 1));
    std::size_t pos = comma + 1;
    int delay = number(pos);
    if (pos >= body.size() || body[pos] != ')') throw fail();
    ++pos;
    int count = 1;
    if (pos < body.size() && body[pos] == '^') {
      ++pos;
      count = number(pos);
      if (count < 2) throw fail();
    }
    for (int k = 0; k < count; ++k) q = q.add(message, delay);
    if (pos < body.size()) {
      if (body[pos] != ',') throw fail();
      ++pos;
    }
    i = pos;
  }
  if (q.name() != text) throw fail();
  return q;
}

namespace {

void enumerate_multisets(const std::vector<std::pair<std::string, int>>& kinds, std::size_t from, int room,
                         const ChannelState& current, std::vector<ChannelState>& out) {
  out.push_back(current);
  if (room == 0) return;
  for (std::size_t k = from; k < kinds.size(); ++k) {
    enumerate_multisets(kinds, k, room - 1, current.add(kinds[k].first, kinds[k].second), out);
  }
}

}  // namespace

Automaton build_channel(const ChannelSpec& spec, ChannelScope scope) {
  if (spec.entry.size() != spec.messages.size() || spec.exit.size() != spec.messages.size()) {
    throw ValidationError("channel spec needs one entry and one exit event per message");
  }
  if (spec.delta < 0 || spec.capacity < 0) throw ValidationError("channel delay and capacity must be >= 0");
  EventSet alphabet{EventLabel::tick()};
  alphabet.insert(spec.entry.begin(), spec.entry.end());
  alphabet.insert(spec.exit.begin(), spec.exit.end());
  Automaton a(spec.name, Alphabet(alphabet));
  const EventId tick = a.event_id(EventLabel::tick());
  std::vector<EventId> entry_ids, exit_ids;
  for (std::size_t m = 0; m < spec.messages.size(); ++m) {
    entry_ids.push_back(a.event_id(spec.entry[m]));
    exit_ids.push_back(a.event_id(spec.exit[m]));
  }

  std::map<ChannelState, StateId> index;
  std::vector<ChannelState> states;
  std::deque<StateId> queue;
  auto intern = [&](const ChannelState& q) {
    if (q.size() > spec.capacity) throw std::logic_error("channel state exceeds capacity");
    auto it = index.find(q);
    if (it != index.end()) return it->second;
    StateId id = a.add_state(q.name());
    index.emplace(q, id);
    states.push_back(q);
    queue.push_back(id);
    return id;
  };

  if (scope == ChannelScope::full) {
    std::vector<std::pair<std::string, int>> kinds;
    for (const auto& m : spec.messages) {
      for (int d = 0; d <= spec.delta; ++d) kinds.emplace_back(m, d);
    }
    std::sort(kinds.begin(), kinds.end());
    std::vector<ChannelState> all;
    enumerate_multisets(kinds, 0, spec.capacity, ChannelState{}, all);
    std::sort(all.begin(), all.end(), [](const ChannelState& x, const ChannelState& y) {
      return std::make_pair(x.size(), x) < std::make_pair(y.size(), y);
    });
    for (const auto& q : all) intern(q);
  }
  a.set_initial(intern(ChannelState{}));

  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    const ChannelState q = states[s];
    if (q.tick_enabled()) a.add_transition(s, tick, intern(q.tick()));
    for (std::size_t m = 0; m < spec.messages.size(); ++m) {
      if (q.size() < spec.capacity) a.add_transition(s, entry_ids[m], intern(q.add(spec.messages[m], spec.delta)));
      for (int d : q.delays_of(spec.messages[m])) {
        a.add_transition(s, exit_ids[m], intern(q.remove(spec.messages[m], d)));
      }
    }
  }
  return a;
}

ChannelSpec observation_channel_spec(const SystemConfig& cfg) {
  validate_config(cfg);
  ChannelSpec spec;
  spec.name = "OC";
  spec.delta = cfg.delta_o;
  spec.capacity = capacity_observation(cfg.rates.n_f, cfg.rates.u, cfg.delta_o);
  for (const auto& e : cfg.events) {
    if (!e.observable) continue;
    spec.messages.push_back(e.name);
    spec.entry.push_back(e.compromised ? EventLabel::compromised(e.name) : EventLabel::in(e.name));
    spec.exit.push_back(EventLabel::out(e.name));
  }
  return spec;
}

ChannelSpec control_channel_spec(const SystemConfig& cfg) {
  validate_config(cfg);
  ChannelSpec spec;
  spec.name = "CC";
  spec.delta = cfg.delta_c;
  spec.capacity = capacity_control(cfg.rates.n_f, cfg.rates.u, cfg.rates.v, cfg.delta_o, cfg.delta_c);
  for (const auto& g : cfg.gamma()) {
    spec.messages.push_back(g);
    spec.entry.push_back(EventLabel::command_in(g));
    spec.exit.push_back(EventLabel::command_out(g));
  }
  return spec;
}

Automaton build_observation_channel(const SystemConfig& cfg, ChannelScope scope) {
  return build_channel(observation_channel_spec(cfg), scope);
}

Automaton build_control_channel(const SystemConfig& cfg, ChannelScope scope) {
  return build_channel(control_channel_spec(cfg), scope);
}

Automaton relabel_to_attack_free(const Automaton& oc) {
  std::vector<EventLabel> relabeled;
  for (const auto& e : oc.alphabet()) {
    if (e.role() == Role::plain) {
      throw ValidationError("channel '" + oc.name() + "' already uses plain event '" + e.base() + "'");
    }
    if (e.role() == Role::compromised || e.role() == Role::in) {
      relabeled.push_back(EventLabel::plain(e.base()));
    } else {
      relabeled.push_back(e);
    }
  }
  std::vector<EventLabel> by_id = relabeled;
  Automaton out(oc.name() + "T", Alphabet(std::move(relabeled)));
  for (StateId s = 0; s < oc.state_count(); ++s) out.add_state(oc.state_name(s), oc.is_marked(s));
  if (oc.has_initial()) out.set_initial(oc.initial());
  for (StateId s = 0; s < oc.state_count(); ++s) {
    for (const Edge& e : oc.edges(s)) out.add_transition(s, by_id[e.event], e.target);
  }
  return out;
}

std::uint64_t enumerate_channel_states(std::uint64_t kinds, std::uint64_t delta, std::uint64_t capacity) {
  if (kinds == 0) throw ValidationError("channel needs at least one message kind");
  const std::uint64_t m = kinds * (delta + 1);
  // Σ_{i=0..C} m^i, which equals the closed form and also covers m = 1.
  std::uint64_t total = 0;
  std::uint64_t power = 1;
  for (std::uint64_t i = 0; i <= capacity; ++i) {
    if (total > UINT64_MAX - power) throw std::overflow_error("channel state count overflows");
    total += power;
    if (i < capacity) {
      if (power > UINT64_MAX / m) throw std::overflow_error("channel state count overflows");
      power *= m;
    }
  }
  return total;
}

std::uint64_t count_channel_multisets(std::uint64_t kinds, std::uint64_t delta, std::uint64_t capacity) {
  if (kinds == 0) throw ValidationError("channel needs at least one message kind");
  const std::uint64_t m = kinds * (delta + 1);
  // binom(m + C, C), built incrementally so intermediate values stay exact.
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= capacity; ++i) {
    const std::uint64_t factor = m + i;
    if (result > UINT64_MAX / factor) throw std::overflow_error("channel state count overflows");
    result = result * factor / i;
  }
  return result;
}

}  // namespace covsyn
