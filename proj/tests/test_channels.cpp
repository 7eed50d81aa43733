#include <doctest.h>

#include "covsyn/channels.hpp"
#include "covsyn/error.hpp"
#include "covsyn/operations.hpp"
#include "support.hpp"

using namespace covsyn;

namespace {

// Guideway timing with four observable events and three commands.
const char* kGuideway = R"(
[parameters] delta_o=1 delta_c=0 delta_s=0 n_f=1 u=1 v=1
[events]
  a1 c  o  ao comp te=0
  a2 c  uo -  -    te=0
  a3 uc o  ao comp -
  b1 c  o  ao comp te=0
  b2 c  uo -  -    te=0
  b3 uc o  ao comp -
[commands]
  v1 = a1 a2
  v2 = b1 b2
  v3 = a1 b1
[damage] 5 10
)";

// Two observable events, only one compromised.
const char* kSmall = R"(
[parameters] delta_o=1 delta_c=0 delta_s=0 n_f=1 u=1 v=1
[events]
  a c o ao comp te=0
  b c o ao -    te=0
[commands]
  v = a
[damage]
)";

}  // namespace

TEST_CASE("capacity of the observation channel") {
  CHECK(capacity_observation(1, 1, 1) == 2);
  CHECK(capacity_observation(1, 1, 0) == 1);
  CHECK(capacity_observation(2, 3, 4) == 30);
}

TEST_CASE("capacity of the control channel") {
  CHECK(capacity_control(1, 1, 1, 1, 0) == 3);
  CHECK(capacity_control(1, 1, 1, 0, 0) == 2);
  CHECK(capacity_control(2, 1, 2, 1, 1) == 16);
}

TEST_CASE("channel state operations") {
  const ChannelState empty;
  CHECK(empty.name() == "{}");
  CHECK(empty.tick_enabled());
  CHECK(empty.tick() == empty);
  const ChannelState q = empty.add("a", 1).add("a", 1).add("a", 0);
  CHECK(q.name() == "{(a,0),(a,1)^2}");
  CHECK(q.size() == 3);
  CHECK_FALSE(q.tick_enabled());
  CHECK(q.delays_of("a") == std::vector<int>{0, 1});
  CHECK(q.remove("a", 0).tick().name() == "{(a,0)^2}");
  CHECK(parse_channel_state(q.name()) == q);
  CHECK_THROWS_AS(parse_channel_state("{(a,0"), ParseError);
  CHECK_THROWS(q.remove("b", 0));
}

TEST_CASE("observation channel transitions") {
  const SystemConfig cfg = support::config(kGuideway);
  const Automaton oc = build_observation_channel(cfg);
  SUBCASE("alphabet: compromised entries, exits and tick") {
    EventSet expected = observation_entries(cfg);
    expected = set_union(expected, labels(Role::out, cfg.sigma_o()));
    expected.insert(EventLabel::tick());
    CHECK(oc.alphabet().to_set() == expected);
  }
  SUBCASE("tick at the empty channel") {
    CHECK(support::successor_names(oc, "{}", "tick") == std::set<std::string>{"{}"});
  }
  SUBCASE("entry adds the message at full delay") {
    CHECK(support::successor_names(oc, "{}", "a1#") == std::set<std::string>{"{(a1,1)}"});
  }
  SUBCASE("exit from a state holding two copies at different delays") {
    ChannelSpec spec;
    spec.name = "OC";
    spec.messages = {"a", "b"};
    spec.entry = {EventLabel::compromised("a"), EventLabel::compromised("b")};
    spec.exit = {EventLabel::out("a"), EventLabel::out("b")};
    spec.delta = 1;
    spec.capacity = 3;
    const Automaton ch = build_channel(spec);
    const std::string q = "{(a,0),(a,1),(b,1)}";
    REQUIRE(ch.find_state(q).has_value());
    CHECK(support::successor_names(ch, q, "a_out") == std::set<std::string>{"{(a,0),(b,1)}", "{(a,1),(b,1)}"});
    CHECK(support::successor_names(ch, q, "b_out") == std::set<std::string>{"{(a,0),(a,1)}"});
    CHECK(support::successor_names(ch, q, "tick").empty());
  }
  SUBCASE("no entry at full capacity") {
    const std::string full = "{(a1,1)^2}";
    REQUIRE(oc.find_state(full).has_value());
    CHECK(support::successor_names(oc, full, "a1#").empty());
  }
}

TEST_CASE("uncompromised events enter with the in role") {
  const Automaton oc = build_observation_channel(support::config(kSmall));
  CHECK(oc.alphabet().find_spelling("b_in").has_value());
  CHECK_FALSE(oc.alphabet().find_spelling("b#").has_value());
  CHECK(oc.alphabet().find_spelling("a#").has_value());
}

TEST_CASE("control channel transitions") {
  const SystemConfig cfg = support::config(kGuideway);
  const Automaton cc = build_control_channel(cfg);
  CHECK(support::successor_names(cc, "{}", "tick") == std::set<std::string>{"{}"});
  CHECK(support::successor_names(cc, "{}", "v1_in") == std::set<std::string>{"{(v1,0)}"});
  // Zero delay: the command must leave before time moves on.
  CHECK(support::successor_names(cc, "{(v1,0)}", "tick").empty());
  CHECK(support::successor_names(cc, "{(v1,0)}", "v1_out") == std::set<std::string>{"{}"});
}

TEST_CASE("relabeling to the attack-free channel") {
  const SystemConfig cfg = support::config(kSmall);
  const Automaton oc = build_observation_channel(cfg);
  const Automaton oct = relabel_to_attack_free(oc);
  CHECK(oct.state_count() == oc.state_count());
  CHECK(support::successor_names(oct, "{}", "a") == std::set<std::string>{"{(a,1)}"});
  CHECK(support::successor_names(oct, "{}", "b") == std::set<std::string>{"{(b,1)}"});
  CHECK(support::successor_names(oct, "{}", "tick") == std::set<std::string>{"{}"});
  CHECK_FALSE(oct.alphabet().find_spelling("a#").has_value());
  CHECK_THROWS_AS(relabel_to_attack_free(oct), ValidationError);
}

TEST_CASE("closed-form state-size expression") {
  CHECK(enumerate_channel_states(4, 1, 2) == 73);
  CHECK(enumerate_channel_states(3, 0, 3) == 40);
  CHECK(enumerate_channel_states(5, 2, 0) == 1);
}

TEST_CASE("full channel state sets are the bounded multisets") {
  const SystemConfig cfg = support::config(kGuideway);
  const Automaton oc_full = build_observation_channel(cfg, ChannelScope::full);
  const Automaton cc_full = build_control_channel(cfg, ChannelScope::full);
  CHECK(oc_full.state_count() == support::brute_force_multisets(4 * 2, 2));
  CHECK(cc_full.state_count() == support::brute_force_multisets(3 * 1, 3));
  CHECK(count_channel_multisets(4, 1, 2) == support::brute_force_multisets(8, 2));
  CHECK(count_channel_multisets(3, 0, 3) == support::brute_force_multisets(3, 3));
}

TEST_CASE("channel invariants on every constructed state") {
  const SystemConfig cfg = support::config(kGuideway);
  for (const ChannelScope scope : {ChannelScope::reachable, ChannelScope::full}) {
    for (const Automaton& ch : {build_observation_channel(cfg, scope), build_control_channel(cfg, scope)}) {
      const bool is_oc = ch.name() == "OC";
      const int capacity = is_oc ? capacity_observation(1, 1, 1) : capacity_control(1, 1, 1, 1, 0);
      const int delta = is_oc ? cfg.delta_o : cfg.delta_c;
      const EventId tick = ch.event_id(EventLabel::tick());
      for (StateId s = 0; s < ch.state_count(); ++s) {
        const ChannelState q = parse_channel_state(ch.state_name(s));
        CHECK(q.size() <= capacity);
        bool has_zero = false;
        for (const auto& e : q.entries()) {
          CHECK(e.delay >= 0);
          CHECK(e.delay <= delta);
          has_zero = has_zero || e.delay == 0;
        }
        CHECK(ch.enabled(s, tick) == !has_zero);
      }
    }
  }
}

TEST_CASE("non-FIFO witness: a later entry can leave first") {
  const SystemConfig cfg = support::config(kGuideway);
  const Automaton oc = build_observation_channel(cfg);
  // a1 enters, a tick passes, b1 enters; b1 may now leave before a1.
  const auto path = support::word(oc, {"a1#", "tick", "b1#", "b1_out"});
  CHECK(accepts(oc, path));
}

TEST_CASE("zero capacity gives a single state") {
  const SystemConfig cfg = support::config(R"(
[parameters] delta_o=0 delta_c=0 delta_s=0 n_f=0 u=0 v=0
[events]
  a c o ao comp te=0
[commands]
  v = a
[damage]
)");
  CHECK(build_observation_channel(cfg, ChannelScope::full).state_count() == 1);
  CHECK(build_control_channel(cfg, ChannelScope::full).state_count() == 1);
}
