#pragma once

#include "covsyn/automaton.hpp"
#include "covsyn/config.hpp"
#include "covsyn/report.hpp"

namespace covsyn {

/// AC: states init, q0..qU, o_σ (σ ∈ Σ_o,a−Σ_s,a) and uo_σ (σ ∈ Σ_o−Σ_o,a).
/// With cfg.count_forwarded off, a forwarded σ^in leads to q0 instead of q1.
Automaton build_attack_constraints(const SystemConfig& cfg);

/// SA-controllability (every attacker-uncontrollable event defined at every
/// state) and SA-observability (events hidden from the attacker only
/// self-loop). Throws ValidationError when the alphabet is not `alphabet`.
ValidationReport validate_attack(const Automaton& a, const ControlConstraint& c, const EventSet& alphabet);
ValidationReport validate_attack(const Automaton& a, const SystemConfig& cfg);

/// Attacker that relays every compromised reading unchanged and inserts
/// nothing: idle -σ-> fwd_σ -σ#-> sent -stop-> idle.
Automaton forwarding_attack(const SystemConfig& cfg);

/// Single state with self-loops on all attacker-uncontrollable events.
Automaton silent_attack(const SystemConfig& cfg);

}  // namespace covsyn
