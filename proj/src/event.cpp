#include "covsyn/event.hpp"

#include <array>
#include <cctype>

#include "covsyn/error.hpp"

namespace covsyn {

namespace {

constexpr std::array<std::string_view, 9> kRoleNames = {
    "plain", "in", "compromised", "out", "command", "command-in", "command-out", "tick", "stop",
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view role_name(Role role) { return kRoleNames[static_cast<std::size_t>(role)]; }

std::optional<Role> parse_role(std::string_view name) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == name) return static_cast<Role>(i);
  }
  return std::nullopt;
}

bool is_valid_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  // Reserved so spellings stay unambiguous.
  if (name == "tick" || name == "stop") return false;
  return !ends_with(name, "_in") && !ends_with(name, "_out");
}

EventLabel::EventLabel(Role role, std::string base) : role_(role), base_(std::move(base)) {
  if (role_ == Role::tick || role_ == Role::stop) {
    if (!base_.empty()) {
      throw ValidationError("event role '" + std::string(role_name(role_)) + "' takes no base name");
    }
    return;
  }
  if (!is_valid_identifier(base_)) {
    throw ValidationError("invalid event base name '" + base_ + "'");
  }
}

std::string EventLabel::spelling() const {
  switch (role_) {
    case Role::plain:
    case Role::command:
      return base_;
    case Role::in:
    case Role::command_in:
      return base_ + "_in";
    case Role::out:
    case Role::command_out:
      return base_ + "_out";
    case Role::compromised:
      return base_ + "#";
    case Role::tick:
      return "tick";
    case Role::stop:
      return "stop";
  }
  return base_;
}

EventLabel parse_spelling(std::string_view token) {
  if (token == "tick") return EventLabel::tick();
  if (token == "stop") return EventLabel::stop();
  if (ends_with(token, "#")) return EventLabel::compromised(std::string(token.substr(0, token.size() - 1)));
  if (ends_with(token, "_in")) return EventLabel::in(std::string(token.substr(0, token.size() - 3)));
  if (ends_with(token, "_out")) return EventLabel::out(std::string(token.substr(0, token.size() - 4)));
  return EventLabel::plain(std::string(token));
}

}  // namespace covsyn
