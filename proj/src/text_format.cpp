#include "covsyn/text_format.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "covsyn/error.hpp"

namespace covsyn {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    if (line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_suffix(std::string_view s, std::string_view suffix, std::string_view token) {
  if (s.size() <= suffix.size() || s.substr(s.size() - suffix.size()) != suffix) {
    throw ValidationError("event '" + std::string(token) + "' is not spelled for its role");
  }
  return s.substr(0, s.size() - suffix.size());
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string alphabet_token(const EventLabel& e) {
  if (e.role() == Role::tick || e.role() == Role::stop) return e.spelling();
  return e.spelling() + ":" + std::string(role_name(e.role()));
}

EventLabel parse_alphabet_token(std::string_view token) {
  if (token == "tick") return EventLabel::tick();
  if (token == "stop") return EventLabel::stop();
  auto colon = token.rfind(':');
  if (colon == std::string_view::npos) {
    throw ValidationError("alphabet entry '" + std::string(token) + "' needs a ':role' suffix");
  }
  auto spelling = token.substr(0, colon);
  auto role = parse_role(token.substr(colon + 1));
  if (!role) throw ValidationError("unknown event role in '" + std::string(token) + "'");
  switch (*role) {
    case Role::plain:
    case Role::command:
      return EventLabel(*role, std::string(spelling));
    case Role::in:
    case Role::command_in:
      return EventLabel(*role, std::string(strip_suffix(spelling, "_in", token)));
    case Role::out:
    case Role::command_out:
      return EventLabel(*role, std::string(strip_suffix(spelling, "_out", token)));
    case Role::compromised:
      return EventLabel(*role, std::string(strip_suffix(spelling, "#", token)));
    case Role::tick:
    case Role::stop:
      break;
  }
  throw ValidationError("'" + std::string(token) + "': tick and stop are written bare");
}

Automaton parse_automaton(std::string_view text) {
  std::string name;
  bool have_name = false;
  bool have_alphabet = false;
  std::vector<EventLabel> events;
  struct Pending {
    std::size_t line;
    std::vector<std::string> tokens;
  };
  std::vector<Pending> states, initial, marked, trans;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto directive = tokens.front();
    std::vector<std::string> args(tokens.begin() + 1, tokens.end());
    try {
      if (directive == ".automaton") {
        if (have_name) throw ParseError("duplicate .automaton", line_no);
        if (args.size() != 1) throw ParseError(".automaton takes one name", line_no);
        name = args[0];
        have_name = true;
      } else if (directive == ".alphabet") {
        have_alphabet = true;
        for (const auto& t : args) events.push_back(parse_alphabet_token(t));
      } else if (directive == ".states") {
        states.push_back({line_no, std::move(args)});
      } else if (directive == ".initial") {
        if (args.size() != 1) throw ParseError(".initial takes one state", line_no);
        if (!initial.empty()) throw ParseError("duplicate .initial", line_no);
        initial.push_back({line_no, std::move(args)});
      } else if (directive == ".marked") {
        marked.push_back({line_no, std::move(args)});
      } else if (directive == ".trans") {
        if (args.size() != 3) throw ParseError(".trans takes SOURCE EVENT TARGET", line_no);
        trans.push_back({line_no, std::move(args)});
      } else {
        throw ParseError("unknown directive '" + std::string(directive) + "'", line_no);
      }
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (end == text.size()) break;
  }
  if (!have_name) throw ParseError("missing .automaton", 0);
  if (!have_alphabet) throw ParseError("missing .alphabet", 0);
  if (initial.empty()) throw ParseError("missing .initial", 0);

  Automaton a;
  try {
    a = Automaton(name, Alphabet(std::move(events)));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 0);
  }
  auto lookup = [&](const std::string& s, std::size_t line) {
    auto id = a.find_state(s);
    if (!id) throw ParseError("undeclared state '" + s + "'", line);
    return *id;
  };
  for (const auto& p : states) {
    for (const auto& s : p.tokens) {
      try {
        a.add_state(s);
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), p.line);
      }
    }
  }
  a.set_initial(lookup(initial.front().tokens[0], initial.front().line));
  for (const auto& p : marked) {
    for (const auto& s : p.tokens) a.set_marked(lookup(s, p.line));
  }
  for (const auto& p : trans) {
    auto event = a.alphabet().find_spelling(p.tokens[1]);
    if (!event) throw ParseError("event '" + p.tokens[1] + "' is not in the alphabet", p.line);
    a.add_transition(lookup(p.tokens[0], p.line), *event, lookup(p.tokens[2], p.line));
  }
  return a;
}

std::string serialize_automaton(const Automaton& a) {
  auto check = [](const std::string& s) {
    if (s.empty() || s.front() == '#' || s.find_first_of(" \t\r\n") != std::string::npos) {
      throw ValidationError("name '" + s + "' cannot be written in the text format");
    }
  };
  check(a.name());
  std::ostringstream out;
  out << ".automaton " << a.name() << '\n';
  out << ".alphabet ";
  for (const auto& e : a.alphabet()) out << ' ' << alphabet_token(e);
  out << '\n';
  for (StateId s = 0; s < a.state_count(); ++s) {
    check(a.state_name(s));
    out << ".states    " << a.state_name(s) << '\n';
  }
  if (a.has_initial()) out << ".initial   " << a.state_name(a.initial()) << '\n';
  for (StateId s : a.marked_states()) out << ".marked    " << a.state_name(s) << '\n';
  for (StateId s = 0; s < a.state_count(); ++s) {
    for (const Edge& e : a.edges(s)) {
      out << ".trans     " << a.state_name(s) << ' ' << a.alphabet()[e.event].spelling() << ' '
          << a.state_name(e.target) << '\n';
    }
  }
  return out.str();
}

std::string to_dot(const Automaton& a, const DotOptions& options) {
  std::ostringstream out;
  out << "digraph " << dot_quote(a.name()) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=ellipse];\n";
  for (StateId s = 0; s < a.state_count(); ++s) {
    out << "  s" << s << " [label=" << dot_quote(a.state_name(s));
    if (a.has_initial() && s == a.initial()) out << ", peripheries=2";
    if (a.is_marked(s)) out << ", style=filled, fillcolor=lightgrey";
    if (!options.highlight_state.empty() && a.state_name(s) == options.highlight_state) {
      out << ", color=red, penwidth=2";
    }
    out << "];\n";
  }
  for (StateId s = 0; s < a.state_count(); ++s) {
    for (const Edge& e : a.edges(s)) {
      out << "  s" << s << " -> s" << e.target << " [label=" << dot_quote(a.alphabet()[e.event].spelling())
          << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

Automaton read_automaton_file(const std::string& path) { return parse_automaton(read_text_file(path)); }

void write_automaton_file(const Automaton& a, const std::string& path) {
  write_text_file(path, serialize_automaton(a));
}

}  // namespace covsyn
