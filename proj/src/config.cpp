#include "covsyn/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "covsyn/error.hpp"
#include "covsyn/text_format.hpp"

namespace covsyn {

namespace {

std::vector<std::string> tokens_of(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_nonnegative(std::string_view s, std::string_view what, std::size_t line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
    throw ParseError(std::string(what) + " must be a nonnegative integer, got '" + std::string(s) + "'", line);
  }
  return value;
}

template <class Pred>
std::vector<std::string> select(const std::vector<EventSpec>& events, Pred pred) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (pred(e)) out.push_back(e.name);
  }
  return out;
}

}  // namespace

const EventSpec& SystemConfig::event(std::string_view name) const {
  auto it = std::lower_bound(events.begin(), events.end(), name,
                             [](const EventSpec& e, std::string_view n) { return e.name < n; });
  if (it == events.end() || it->name != name) throw ValidationError("unknown plant event '" + std::string(name) + "'");
  return *it;
}

bool SystemConfig::has_event(std::string_view name) const {
  return std::any_of(events.begin(), events.end(), [&](const EventSpec& e) { return e.name == name; });
}

std::vector<std::string> SystemConfig::sigma() const {
  return select(events, [](const EventSpec&) { return true; });
}
std::vector<std::string> SystemConfig::sigma_c() const {
  return select(events, [](const EventSpec& e) { return e.controllable; });
}
std::vector<std::string> SystemConfig::sigma_uc() const {
  return select(events, [](const EventSpec& e) { return !e.controllable; });
}
std::vector<std::string> SystemConfig::sigma_o() const {
  return select(events, [](const EventSpec& e) { return e.observable; });
}
std::vector<std::string> SystemConfig::sigma_uo() const {
  return select(events, [](const EventSpec& e) { return !e.observable; });
}
std::vector<std::string> SystemConfig::sigma_oa() const {
  return select(events, [](const EventSpec& e) { return e.attacker_observable; });
}
std::vector<std::string> SystemConfig::sigma_sa() const {
  return select(events, [](const EventSpec& e) { return e.compromised; });
}

std::vector<std::string> SystemConfig::gamma() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : commands) out.push_back(name);
  return out;
}

int SystemConfig::max_exec_delay() const {
  int m = 0;
  for (const auto& e : events) {
    if (e.exec_delay) m = std::max(m, *e.exec_delay);
  }
  return m;
}

void validate_config(const SystemConfig& cfg) {
  if (cfg.delta_o < 0 || cfg.delta_c < 0 || cfg.delta_s < 0) throw ValidationError("delay bounds must be >= 0");
  if (cfg.rates.n_f < 0 || cfg.rates.u < 0 || cfg.rates.v < 0) throw ValidationError("rate bounds must be >= 0");
  if (cfg.events.empty()) throw ValidationError("no plant events declared");
  std::set<std::string> names;
  for (const auto& e : cfg.events) {
    if (!is_valid_identifier(e.name)) throw ValidationError("invalid event name '" + e.name + "'");
    if (!names.insert(e.name).second) throw ValidationError("duplicate event '" + e.name + "'");
    if (e.compromised && !e.attacker_observable) {
      throw ValidationError("compromised event '" + e.name + "' must be attacker-observable");
    }
    if (e.attacker_observable && !e.observable) {
      throw ValidationError("attacker-observable event '" + e.name + "' must be observable");
    }
    if (e.controllable != e.exec_delay.has_value()) {
      throw ValidationError("event '" + e.name + "': execution delay is required exactly for controllable events");
    }
    if (e.exec_delay && *e.exec_delay < 0) throw ValidationError("event '" + e.name + "': negative execution delay");
  }
  if (!std::is_sorted(cfg.events.begin(), cfg.events.end(),
                      [](const EventSpec& a, const EventSpec& b) { return a.name < b.name; })) {
    throw ValidationError("events must be sorted by name");
  }
  for (const auto& [name, members] : cfg.commands) {
    if (!is_valid_identifier(name)) throw ValidationError("invalid command name '" + name + "'");
    if (names.contains(name)) throw ValidationError("command '" + name + "' clashes with a plant event");
    if (members.empty()) throw ValidationError("command '" + name + "' is empty");
    for (const auto& m : members) {
      if (!cfg.has_event(m)) throw ValidationError("command '" + name + "' references unknown event '" + m + "'");
      if (!cfg.event(m).controllable) {
        throw ValidationError("command '" + name + "' contains uncontrollable event '" + m + "'");
      }
    }
  }
}

SystemConfig parse_config(std::string_view text) {
  SystemConfig cfg;
  std::string section;
  std::set<std::string> seen_params;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto tokens = tokens_of(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!tokens.empty() && tokens.front().size() > 2 && tokens.front().front() == '[' &&
        tokens.front().back() == ']') {
      section = tokens.front().substr(1, tokens.front().size() - 2);
      if (section != "parameters" && section != "events" && section != "commands" && section != "damage") {
        throw ParseError("unknown section [" + section + "]", line_no);
      }
      tokens.erase(tokens.begin());
    }
    if (!tokens.empty()) {
      if (section.empty()) throw ParseError("content before the first section", line_no);
      if (section == "parameters") {
        for (const auto& t : tokens) {
          auto eq = t.find('=');
          if (eq == std::string::npos) throw ParseError("expected key=value, got '" + t + "'", line_no);
          auto key = t.substr(0, eq);
          auto value = std::string_view(t).substr(eq + 1);
          if (!seen_params.insert(key).second) throw ParseError("duplicate parameter '" + key + "'", line_no);
          if (key == "delta_o") {
            cfg.delta_o = parse_nonnegative(value, key, line_no);
          } else if (key == "delta_c") {
            cfg.delta_c = parse_nonnegative(value, key, line_no);
          } else if (key == "delta_s") {
            cfg.delta_s = parse_nonnegative(value, key, line_no);
          } else if (key == "n_f") {
            cfg.rates.n_f = parse_nonnegative(value, key, line_no);
          } else if (key == "u") {
            cfg.rates.u = parse_nonnegative(value, key, line_no);
          } else if (key == "v") {
            cfg.rates.v = parse_nonnegative(value, key, line_no);
          } else if (key == "count_forwarded") {
            if (value != "on" && value != "off") throw ParseError("count_forwarded must be on or off", line_no);
            cfg.count_forwarded = value == "on";
          } else {
            throw ParseError("unknown parameter '" + key + "'", line_no);
          }
        }
      } else if (section == "events") {
        if (tokens.size() != 6) throw ParseError("event line needs: name c|uc o|uo ao|- comp|- te=N|-", line_no);
        EventSpec e;
        e.name = tokens[0];
        if (!is_valid_identifier(e.name)) throw ParseError("invalid event name '" + e.name + "'", line_no);
        auto flag = [&](const std::string& t, const char* yes, const char* no) {
          if (t == yes) return true;
          if (t == no) return false;
          throw ParseError("expected '" + std::string(yes) + "' or '" + no + "', got '" + t + "'", line_no);
        };
        e.controllable = flag(tokens[1], "c", "uc");
        e.observable = flag(tokens[2], "o", "uo");
        e.attacker_observable = flag(tokens[3], "ao", "-");
        e.compromised = flag(tokens[4], "comp", "-");
        if (tokens[5] != "-") {
          if (tokens[5].rfind("te=", 0) != 0) throw ParseError("expected te=N or '-'", line_no);
          e.exec_delay = parse_nonnegative(std::string_view(tokens[5]).substr(3), "te", line_no);
        }
        if (cfg.has_event(e.name)) throw ParseError("duplicate event '" + e.name + "'", line_no);
        cfg.events.push_back(std::move(e));
      } else if (section == "commands") {
        if (tokens.size() < 3 || tokens[1] != "=") throw ParseError("command line needs: name = event...", line_no);
        if (cfg.commands.contains(tokens[0])) throw ParseError("duplicate command '" + tokens[0] + "'", line_no);
        std::vector<std::string> members(tokens.begin() + 2, tokens.end());
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        cfg.commands.emplace(tokens[0], std::move(members));
      } else {
        cfg.damage.insert(cfg.damage.end(), tokens.begin(), tokens.end());
      }
    }
    if (end == text.size()) break;
  }
  for (const char* key : {"delta_o", "delta_c", "delta_s", "n_f", "u", "v"}) {
    if (!seen_params.contains(key)) throw ParseError(std::string("missing parameter '") + key + "'", 0);
  }
  std::sort(cfg.events.begin(), cfg.events.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(cfg.damage.begin(), cfg.damage.end());
  cfg.damage.erase(std::unique(cfg.damage.begin(), cfg.damage.end()), cfg.damage.end());
  validate_config(cfg);
  return cfg;
}

SystemConfig read_config_file(const std::string& path) { return parse_config(read_text_file(path)); }

std::string serialize_config(const SystemConfig& cfg) {
  std::ostringstream out;
  out << "[parameters] delta_o=" << cfg.delta_o << " delta_c=" << cfg.delta_c << " delta_s=" << cfg.delta_s
      << " n_f=" << cfg.rates.n_f << " u=" << cfg.rates.u << " v=" << cfg.rates.v
      << " count_forwarded=" << (cfg.count_forwarded ? "on" : "off") << '\n';
  out << "[events]\n";
  for (const auto& e : cfg.events) {
    out << "  " << e.name << ' ' << (e.controllable ? "c" : "uc") << ' ' << (e.observable ? "o" : "uo") << ' '
        << (e.attacker_observable ? "ao" : "-") << ' ' << (e.compromised ? "comp" : "-") << ' ';
    if (e.exec_delay) {
      out << "te=" << *e.exec_delay;
    } else {
      out << '-';
    }
    out << '\n';
  }
  out << "[commands]\n";
  for (const auto& [name, members] : cfg.commands) {
    out << "  " << name << " =";
    for (const auto& m : members) out << ' ' << m;
    out << '\n';
  }
  out << "[damage]";
  for (const auto& d : cfg.damage) out << ' ' << d;
  out << '\n';
  return out.str();
}

EventSet labels(Role role, const std::vector<std::string>& names) {
  EventSet out;
  for (const auto& n : names) out.insert(EventLabel(role, n));
  return out;
}

EventSet set_union(const EventSet& a, const EventSet& b) {
  EventSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

EventSet set_minus(const EventSet& a, const EventSet& b) {
  EventSet out;
  for (const auto& e : a) {
    if (!b.contains(e)) out.insert(e);
  }
  return out;
}

std::vector<std::string> names_minus(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  }
  return out;
}

EventSet observation_entries(const SystemConfig& cfg) {
  return set_union(labels(Role::in, names_minus(cfg.sigma_o(), cfg.sigma_sa())),
                   labels(Role::compromised, cfg.sigma_sa()));
}

EventSet attack_alphabet(const SystemConfig& cfg) {
  EventSet out = labels(Role::plain, cfg.sigma());
  out = set_union(out, observation_entries(cfg));
  out = set_union(out, labels(Role::out, cfg.sigma_o()));
  const auto gamma = cfg.gamma();
  out = set_union(out, labels(Role::command_in, gamma));
  out = set_union(out, labels(Role::command_out, gamma));
  out = set_union(out, labels(Role::command, gamma));
  out.insert(EventLabel::tick());
  out.insert(EventLabel::stop());
  return out;
}

ControlConstraint attack_control_constraint(const SystemConfig& cfg) {
  ControlConstraint c;
  c.controllable = labels(Role::compromised, cfg.sigma_sa());
  c.controllable.insert(EventLabel::stop());
  c.observable = labels(Role::plain, cfg.sigma_oa());
  c.observable = set_union(c.observable, labels(Role::in, names_minus(cfg.sigma_oa(), cfg.sigma_sa())));
  c.observable = set_union(c.observable, labels(Role::compromised, cfg.sigma_sa()));
  c.observable.insert(EventLabel::tick());
  c.observable.insert(EventLabel::stop());
  return c;
}

ControlConstraint supervisor_control_constraint(const SystemConfig& cfg) {
  ControlConstraint c;
  c.controllable = labels(Role::command_in, cfg.gamma());
  c.observable = set_union(c.controllable, labels(Role::out, cfg.sigma_o()));
  c.observable.insert(EventLabel::tick());
  return c;
}

}  // namespace covsyn
