#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covsyn/event.hpp"

namespace covsyn {

struct EventSpec {
  std::string name;
  bool controllable = false;
  bool observable = false;
  bool attacker_observable = false;
  bool compromised = false;
  /// Ticks that must pass before the event may fire once commanded.
  /// Present exactly for controllable events.
  std::optional<int> exec_delay;
};

struct RateBounds {
  int n_f = 0;
  int u = 0;
  int v = 0;
};

struct SystemConfig {
  int delta_o = 0;
  int delta_c = 0;
  int delta_s = 0;
  RateBounds rates;
  /// Whether a forwarded uncompromised observation counts toward U.
  bool count_forwarded = true;
  std::vector<EventSpec> events;                             ///< sorted by name
  std::map<std::string, std::vector<std::string>> commands;  ///< name -> events
  std::vector<std::string> damage;                           ///< plant state names

  const EventSpec& event(std::string_view name) const;
  bool has_event(std::string_view name) const;

  std::vector<std::string> sigma() const;
  std::vector<std::string> sigma_c() const;
  std::vector<std::string> sigma_uc() const;
  std::vector<std::string> sigma_o() const;
  std::vector<std::string> sigma_uo() const;
  std::vector<std::string> sigma_oa() const;
  std::vector<std::string> sigma_sa() const;
  std::vector<std::string> gamma() const;
  int max_exec_delay() const;
};

/// Throws ValidationError listing the first violated invariant.
void validate_config(const SystemConfig& cfg);

/// Parses the sectioned config format and validates it. Errors carry the
/// 1-based line number.
SystemConfig parse_config(std::string_view text);
SystemConfig read_config_file(const std::string& path);
std::string serialize_config(const SystemConfig& cfg);

// Alphabet helpers over a config.
EventSet labels(Role role, const std::vector<std::string>& names);
EventSet set_union(const EventSet& a, const EventSet& b);
EventSet set_minus(const EventSet& a, const EventSet& b);
std::vector<std::string> names_minus(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Σ ∪ (Σ_o−Σ_s,a)^in ∪ Σ_s,a^# ∪ Σ_o^out ∪ Γ^in ∪ Γ^out ∪ Γ ∪ {tick, stop};
/// shared by the attack constraints, attacks and networked supervisors.
EventSet attack_alphabet(const SystemConfig& cfg);
/// Entry events of the observation channel: (Σ_o−Σ_s,a)^in ∪ Σ_s,a^#.
EventSet observation_entries(const SystemConfig& cfg);

struct ControlConstraint {
  EventSet controllable;
  EventSet observable;
};

/// (Σ_s,a^# ∪ {stop}, Σ_o,a ∪ (Σ_o,a−Σ_s,a)^in ∪ Σ_s,a^# ∪ {tick, stop})
ControlConstraint attack_control_constraint(const SystemConfig& cfg);
/// (Γ^in, Γ^in ∪ Σ_o^out ∪ {tick})
ControlConstraint supervisor_control_constraint(const SystemConfig& cfg);

}  // namespace covsyn
