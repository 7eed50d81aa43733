#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "covsyn/automaton.hpp"
#include "covsyn/config.hpp"

namespace covsyn {

int capacity_observation(int n_f, int u, int delta_o);
int capacity_control(int n_f, int u, int v, int delta_o, int delta_c);

/// Bounded multiset of (message, remaining delay) pairs in canonical order.
class ChannelState {
 public:
  struct Entry {
    std::string message;
    int delay;
    int count;

    auto operator<=>(const Entry&) const = default;
  };

  ChannelState() = default;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  int size() const noexcept;
  bool empty() const noexcept { return entries_.empty(); }

  /// T^{=0}(q) = ∅, i.e. nothing must leave before the next tick.
  bool tick_enabled() const noexcept;
  ChannelState tick() const;
  /// q ⊎ {(message, delay)}
  ChannelState add(const std::string& message, int delay) const;
  /// q − {(message, delay)}; the pair must be present.
  ChannelState remove(const std::string& message, int delay) const;
  /// Distinct delays at which `message` is present, ascending.
  std::vector<int> delays_of(const std::string& message) const;

  /// "{}" or "{(a,0),(a,1)^2}".
  std::string name() const;

  auto operator<=>(const ChannelState&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Inverse of ChannelState::name(). Throws ParseError on malformed input.
ChannelState parse_channel_state(std::string_view text);

struct ChannelSpec {
  std::string name;
  /// Message base names; entry and exit events are derived from the roles.
  std::vector<std::string> messages;
  /// Entry event per message (same order as `messages`).
  std::vector<EventLabel> entry;
  std::vector<EventLabel> exit;
  int delta = 0;
  int capacity = 0;
};

enum class ChannelScope {
  reachable,  ///< states reachable from ∅
  full,       ///< every multiset within capacity
};

Automaton build_channel(const ChannelSpec& spec, ChannelScope scope = ChannelScope::reachable);
ChannelSpec observation_channel_spec(const SystemConfig& cfg);
ChannelSpec control_channel_spec(const SystemConfig& cfg);
Automaton build_observation_channel(const SystemConfig& cfg, ChannelScope scope = ChannelScope::reachable);
Automaton build_control_channel(const SystemConfig& cfg, ChannelScope scope = ChannelScope::reachable);

/// OC^T: σ^# and σ^in become σ; everything else is unchanged.
Automaton relabel_to_attack_free(const Automaton& oc);

/// ((k(Δ+1))^{C+1} − 1)/(k(Δ+1) − 1), the closed-form channel state-size
/// expression. Throws std::overflow_error when it does not fit.
std::uint64_t enumerate_channel_states(std::uint64_t kinds, std::uint64_t delta, std::uint64_t capacity);
/// Number of multisets of total multiplicity ≤ C over k(Δ+1) element kinds,
/// i.e. the size of the full channel state set.
std::uint64_t count_channel_multisets(std::uint64_t kinds, std::uint64_t delta, std::uint64_t capacity);

}  // namespace covsyn
