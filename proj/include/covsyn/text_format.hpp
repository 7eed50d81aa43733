#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "covsyn/automaton.hpp"

namespace covsyn {

/// Line-oriented automaton format:
///
///   .automaton NAME
///   .alphabet  a1:plain b1#:compromised v1:command tick stop
///   .states    S0 S1 S5
///   .initial   S0
///   .marked    S5
///   .trans     S0 a1 S1
///
/// `#` at the start of a token begins a comment. Directives other than
/// .automaton and .initial may repeat.
Automaton parse_automaton(std::string_view text);
Automaton read_automaton_file(const std::string& path);

/// Canonical rendering; parse_automaton(serialize_automaton(a)) reproduces a
/// with identical state ids.
std::string serialize_automaton(const Automaton& a);
void write_automaton_file(const Automaton& a, const std::string& path);

/// Token `spelling:role`, or a bare `tick` / `stop`.
std::string alphabet_token(const EventLabel& e);
EventLabel parse_alphabet_token(std::string_view token);

struct DotOptions {
  /// State rendered with a highlighted border (the monitor's detection state).
  std::string highlight_state;
};

std::string to_dot(const Automaton& a, const DotOptions& options = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace covsyn
