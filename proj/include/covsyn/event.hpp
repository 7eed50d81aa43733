#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace covsyn {

/// Role an event plays in the networked architecture.
///
/// plain        σ      plant event
/// in           σ_in   plant sends an uncompromised observation into the channel
/// compromised  σ#     attacker sends an observation into the channel
/// out          σ_out  observation leaves the channel
/// command      γ      execution module fetches a stored command
/// command_in   γ_in   supervisor sends a command into the control channel
/// command_out  γ_out  command leaves the control channel
enum class Role : std::uint8_t {
  plain,
  in,
  compromised,
  out,
  command,
  command_in,
  command_out,
  tick,
  stop,
};

std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view name);

bool is_valid_identifier(std::string_view name);

class EventLabel {
 public:
  /// Throws ValidationError when the base does not fit the role.
  EventLabel(Role role, std::string base);

  static EventLabel tick() { return EventLabel(Role::tick, {}); }
  static EventLabel stop() { return EventLabel(Role::stop, {}); }
  static EventLabel plain(std::string base) { return {Role::plain, std::move(base)}; }
  static EventLabel in(std::string base) { return {Role::in, std::move(base)}; }
  static EventLabel compromised(std::string base) { return {Role::compromised, std::move(base)}; }
  static EventLabel out(std::string base) { return {Role::out, std::move(base)}; }
  static EventLabel command(std::string base) { return {Role::command, std::move(base)}; }
  static EventLabel command_in(std::string base) { return {Role::command_in, std::move(base)}; }
  static EventLabel command_out(std::string base) { return {Role::command_out, std::move(base)}; }

  Role role() const noexcept { return role_; }
  const std::string& base() const noexcept { return base_; }

  bool is_plant_message() const noexcept {
    return role_ == Role::plain || role_ == Role::in || role_ == Role::compromised || role_ == Role::out;
  }
  bool is_command() const noexcept {
    return role_ == Role::command || role_ == Role::command_in || role_ == Role::command_out;
  }

  /// Text spelling: x, x_in, x#, x_out, v, v_in, v_out, tick, stop.
  std::string spelling() const;

  auto operator<=>(const EventLabel&) const = default;
  bool operator==(const EventLabel&) const = default;

 private:
  Role role_;
  std::string base_;
};

/// Infers the role from the spelling alone. Bare names are read as plain
/// plant events and `_in`/`_out` suffixes as observation-channel events;
/// command roles must be given explicitly.
EventLabel parse_spelling(std::string_view token);

using EventSet = std::set<EventLabel>;

}  // namespace covsyn
