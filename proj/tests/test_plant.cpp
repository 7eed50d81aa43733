#include <doctest.h>

#include <filesystem>

#include "covsyn/error.hpp"
#include "covsyn/operations.hpp"
#include "covsyn/plant.hpp"
#include "support.hpp"

using namespace covsyn;

namespace {

std::string one_command_config(int delta_s, const std::string& te = "te=0") {
  return "[parameters] delta_o=1 delta_c=0 delta_s=" + std::to_string(delta_s) +
         " n_f=1 u=1 v=1\n[events]\n  s c o ao comp " + te + "\n  u uc o ao - -\n[commands]\n  g = s\n[damage]\n";
}

}  // namespace

TEST_CASE("storage capacity") {
  CHECK(capacity_storage(1, 1, 1, 1, 0, 0) == 3);
  CHECK(capacity_storage(1, 2, 1, 1, 1, 1) == 11);
  CHECK(capacity_storage(0, 0, 0, 0, 0, 0) == 0);
}

TEST_CASE("storage and execution state names") {
  CHECK(storage_state_name({}) == "ε");
  CHECK(storage_state_name({{"v1", 0}, {"v2", 1}}) == "(v1,0)(v2,1)");
  CHECK(parse_storage_state("(v1,0)(v2,1)") == StorageState{{"v1", 0}, {"v2", 1}});
  CHECK(execution_state_name({}) == "{}");
  CHECK(execution_state_name({{"a1", 0}, {"a2", -1}}) == "{(a1,0),(a2,-1)}");
  CHECK(parse_execution_state("{(a1,0),(a2,-1)}") == ExecutionState{{"a1", 0}, {"a2", -1}});
}

TEST_CASE("storage helpers") {
  CHECK(storage_tick({}).empty());
  CHECK(storage_tick({{"g", 0}, {"g", 1}}) == StorageState{{"g", 0}});
  // Rem drops the entry closest to the head.
  CHECK(storage_remove({{"g", 1}, {"g", 0}}, "g") == StorageState{{"g", 0}});
}

TEST_CASE("command storage automaton") {
  const SystemConfig cfg = support::config(one_command_config(1));
  const Automaton cs = build_command_storage(cfg);
  CHECK(support::successor_names(cs, "ε", "g_out") == std::set<std::string>{"(g,1)"});
  CHECK(support::successor_names(cs, "(g,1)", "tick") == std::set<std::string>{"(g,0)"});
  CHECK(support::successor_names(cs, "(g,0)", "tick") == std::set<std::string>{"ε"});
  CHECK(support::successor_names(cs, "(g,1)", "g") == std::set<std::string>{"ε"});
  CHECK(support::successor_names(cs, "ε", "tick") == std::set<std::string>{"ε"});
  // Entries age together, so the head always holds the smaller remaining time.
  CHECK_FALSE(cs.find_state("(g,1)(g,0)").has_value());
  REQUIRE(cs.find_state("(g,0)(g,1)").has_value());
  CHECK(support::successor_names(cs, "(g,0)(g,1)", "g") == std::set<std::string>{"(g,1)"});
  CHECK(support::successor_names(cs, "ε", "g").empty());
}

TEST_CASE("storage is undefined for new commands at capacity") {
  const SystemConfig cfg = support::config(one_command_config(0));
  const Automaton cs = build_command_storage(cfg);
  const int c = capacity_storage(1, 1, 1, 1, 0, 0);
  std::string full;
  for (int i = 0; i < c; ++i) full += "(g,0)";
  REQUIRE(cs.find_state(full).has_value());
  CHECK(support::successor_names(cs, full, "g_out").empty());
}

TEST_CASE("command execution automaton") {
  SUBCASE("zero delay fires immediately and blocks time") {
    const Automaton ce = build_command_execution(support::config(one_command_config(0)));
    CHECK(support::successor_names(ce, "{}", "g") == std::set<std::string>{"{(s,0)}"});
    CHECK(support::successor_names(ce, "{(s,0)}", "s") == std::set<std::string>{"{}"});
    CHECK(support::successor_names(ce, "{(s,0)}", "tick").empty());
    CHECK(support::successor_names(ce, "{}", "tick") == std::set<std::string>{"{}"});
  }
  SUBCASE("uncontrollable events return to idle from every state") {
    const Automaton ce = build_command_execution(support::config(one_command_config(0)));
    for (StateId s = 0; s < ce.state_count(); ++s) {
      CHECK(support::successor_names(ce, ce.state_name(s), "u") == std::set<std::string>{"{}"});
    }
  }
  SUBCASE("two delays: after two ticks only the later event may fire") {
    const SystemConfig cfg = support::config(R"(
[parameters] delta_o=1 delta_c=0 delta_s=0 n_f=1 u=1 v=1
[events]
  s1 c o ao - te=1
  s2 c o ao - te=2
[commands]
  g = s1 s2
[damage]
)");
    const Automaton ce = build_command_execution(cfg);
    const auto path = support::word(ce, {"g", "tick", "tick"});
    CHECK(accepts(ce, path));
    CHECK(support::successor_names(ce, "{}", "g") == std::set<std::string>{"{(s1,1),(s2,2)}"});
    const std::string after = "{(s1,-1),(s2,0)}";
    REQUIRE(ce.find_state(after).has_value());
    CHECK(support::successor_names(ce, after, "s2") == std::set<std::string>{"{}"});
    CHECK(support::successor_names(ce, after, "s1").empty());
    CHECK(support::successor_names(ce, after, "tick").empty());
  }
}

TEST_CASE("plant composition and pruning") {
  SUBCASE("vacuous pruning: only tick and u self-loops") {
    const SystemConfig cfg = support::config(R"(
[parameters] delta_o=0 delta_c=0 delta_s=0 n_f=1 u=0 v=0
[events]
  s c uo - - te=0
  u uc uo - - -
[commands]
  g = s
[damage]
)");
    const Automaton g = support::automaton(".automaton G\n.alphabet s:plain u:plain\n.states 0\n.initial 0\n.trans 0 u 0\n");
    const NetworkedPlant p = build_networked_plant(g, cfg);
    CHECK(p.g_new.state_count() == 1);
    CHECK(support::triples(p.g_new).size() == 2);
    for (const auto& [from, ev, to] : support::triples(p.g_new)) {
      CHECK(from == to);
      CHECK((ev == "tick" || ev == "u"));
    }
  }
  SUBCASE("usable stored command preempts time, fetch stays") {
    const SystemConfig cfg = support::config(one_command_config(1));
    const Automaton g = support::automaton(".automaton G\n.alphabet s:plain u:plain\n.states 0 1\n.initial 0\n.trans 0 s 1\n");
    const NetworkedPlant p = build_networked_plant(g, cfg);
    const auto id = p.g_new.find_state("((g,1),{},0)");
    REQUIRE(id.has_value());
    CHECK(support::successor_names(p.g_new, "((g,1),{},0)", "tick").empty());
    CHECK(support::successor_names(p.g_new, "((g,1),{},0)", "g").size() == 1);
    CHECK(check_networked_plant(p, cfg).empty());
  }
  SUBCASE("active command with nothing enabled is deleted") {
    const SystemConfig cfg = support::config(one_command_config(0));
    // At G state 1 the commanded s is not enabled.
    const Automaton g =
        support::automaton(".automaton G\n.alphabet s:plain u:plain\n.states 0 1\n.initial 0\n.trans 0 u 1\n.trans 0 s 0\n");
    const NetworkedPlant p = build_networked_plant(g, cfg);
    CHECK_FALSE(p.g_new.find_state("(ε,{(s,0)},1)").has_value());
    CHECK(p.g_new.find_state("(ε,{(s,0)},0)").has_value());
    CHECK(check_networked_plant(p, cfg).empty());
  }
}

TEST_CASE("loading plant files") {
  const SystemConfig cfg = support::config(one_command_config(0));
  const auto dir = std::filesystem::temp_directory_path() / "covsyn_plant_test";
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& text) {
    const std::string path = (dir / name).string();
    write_text_file(path, text);
    return path;
  };
  SUBCASE("single state without transitions") {
    const Automaton g = load_plant(write("one.fsa", ".automaton G\n.alphabet s:plain\n.states 0\n.initial 0\n"), cfg);
    CHECK(g.state_count() == 1);
    CHECK(g.alphabet().size() == 2);
  }
  SUBCASE("events outside the plant alphabet") {
    CHECK_THROWS_AS(load_plant(write("bad.fsa", ".automaton G\n.alphabet z:plain\n.states 0\n.initial 0\n"), cfg),
                    ValidationError);
  }
  SUBCASE("undeclared state") {
    CHECK_THROWS_AS(
        load_plant(write("undeclared.fsa", ".automaton G\n.alphabet s:plain\n.states 0\n.initial 0\n.trans 0 s 4\n"),
                   cfg),
        ParseError);
  }
  SUBCASE("guideway fixture") {
    const SystemConfig gw = read_config_file(support::fixture("guideway/system.cfg"));
    const Automaton g = load_plant(support::fixture("guideway/plant.fsa"), gw);
    CHECK(g.state_count() >= 11);
    CHECK(std::set<std::string>(gw.damage.begin(), gw.damage.end()) == std::set<std::string>{"5", "10"});
  }
}

TEST_CASE("guideway networked plant invariants") {
  const SystemConfig cfg = read_config_file(support::fixture("guideway/system.cfg"));
  const NetworkedPlant p = build_networked_plant(load_plant(support::fixture("guideway/plant.fsa"), cfg), cfg);
  CHECK(check_networked_plant(p, cfg).empty());
  CHECK_NOTHROW(check_activity_loop_free(p.g_new));
  CHECK(p.g_new.marked_states().empty());
  // Uncontrollable liveness: whenever G enables a3 or b3, so does G_new.
  for (StateId s = 0; s < p.g_new.state_count(); ++s) {
    for (const std::string ev : {"a3", "b3"}) {
      const EventId g_ev = p.g.event_id(EventLabel::plain(ev));
      if (p.g.enabled(p.g_of[s], g_ev)) CHECK(p.g_new.enabled(s, p.g_new.event_id(EventLabel::plain(ev))));
    }
  }
}

TEST_CASE("activity loops are rejected") {
  const SystemConfig cfg = support::config(R"(
[parameters] delta_o=0 delta_c=0 delta_s=0 n_f=1 u=0 v=0
[events]
  s c uo - - te=0
  u uc uo - - -
[commands]
  g = s
[damage]
)");
  const Automaton g =
      support::automaton(".automaton G\n.alphabet s:plain u:plain\n.states 0 1\n.initial 0\n.trans 0 u 1\n.trans 1 u 0\n");
  const NetworkedPlant p = build_networked_plant(g, cfg);
  CHECK_THROWS_AS(check_activity_loop_free(p.g_new), ValidationError);
}
