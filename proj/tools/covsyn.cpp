#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "covsyn/attacker.hpp"
#include "covsyn/channels.hpp"
#include "covsyn/error.hpp"
#include "covsyn/pipeline.hpp"
#include "covsyn/text_format.hpp"

namespace fs = std::filesystem;
using namespace covsyn;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kNoAttack = 3;

struct Inputs {
  std::string config;
  std::string plant;
  std::string ns;
  std::string out = ".";
  std::string count_forwarded;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool with_out) {
  cmd->add_option("--config", in.config, "system configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--plant", in.plant, "plant automaton")->required()->check(CLI::ExistingFile);
  cmd->add_option("--ns", in.ns, "networked supervisor automaton")->required()->check(CLI::ExistingFile);
  cmd->add_option("--count-forwarded-event", in.count_forwarded,
                  "whether a forwarded uncompromised reading counts toward U")
      ->check(CLI::IsMember({"on", "off"}));
  if (with_out) cmd->add_option("--out", in.out, "output directory");
}

Components load(const Inputs& in) {
  SystemConfig cfg = read_config_file(in.config);
  if (!in.count_forwarded.empty()) cfg.count_forwarded = in.count_forwarded == "on";
  const Automaton g = load_plant(in.plant, cfg);
  const Automaton ns = read_automaton_file(in.ns);
  Components c = build_components(cfg, g, ns);
  for (const auto& w : c.warnings) std::cerr << "warning: " << w << '\n';
  return c;
}

std::string trace_text(const std::vector<EventLabel>& trace) {
  if (trace.empty()) return "ε";
  std::string out;
  for (const auto& e : trace) {
    if (!out.empty()) out += ' ';
    out += e.spelling();
  }
  return out;
}

std::string certificate(const SynthesisProblem& p, const Automaton& a) {
  std::ostringstream out;
  const auto covert = verify_covert(p, a);
  const auto nonblocking = verify_damage_nonblocking(p, a);
  const auto reachable = verify_damage_reachable(p, a);
  const auto report = validate_attack(a, p.constraint, p.alphabet);
  out << "attack_states=" << a.state_count() << '\n';
  out << "valid=" << (report.ok() ? "true" : "false") << '\n';
  out << report.to_text();
  out << "covert=" << (covert.holds ? "true" : "false") << '\n';
  if (covert.has_witness) out << "  bad_trace: " << trace_text(covert.witness) << '\n';
  out << "nonblocking=" << (nonblocking.holds ? "true" : "false") << '\n';
  if (nonblocking.has_witness) out << "  blocking_trace: " << trace_text(nonblocking.witness) << '\n';
  out << "damage_reachable=" << (reachable.holds ? "true" : "false") << '\n';
  if (reachable.has_witness) out << "  damage_trace: " << trace_text(reachable.witness) << '\n';
  return out.str();
}

int cmd_capacity(const std::string& config_path) {
  const SystemConfig cfg = read_config_file(config_path);
  const int c_oc = capacity_observation(cfg.rates.n_f, cfg.rates.u, cfg.delta_o);
  const int c_cc = capacity_control(cfg.rates.n_f, cfg.rates.u, cfg.rates.v, cfg.delta_o, cfg.delta_c);
  const int c_cs = capacity_storage(cfg.rates.n_f, cfg.rates.u, cfg.rates.v, cfg.delta_o, cfg.delta_c, cfg.delta_s);
  std::cout << "C_oc=" << c_oc << " C_cc=" << c_cc << " C_cs=" << c_cs << '\n';
  const auto n_o = cfg.sigma_o().size();
  const auto n_g = cfg.gamma().size();
  if (n_o > 0) {
    std::cout << "OC states: formula=" << enumerate_channel_states(n_o, cfg.delta_o, c_oc)
              << " constructed=" << build_observation_channel(cfg, ChannelScope::full).state_count() << '\n';
  }
  if (n_g > 0) {
    std::cout << "CC states: formula=" << enumerate_channel_states(n_g, cfg.delta_c, c_cc)
              << " constructed=" << build_control_channel(cfg, ChannelScope::full).state_count() << '\n';
    std::cout << "CS states: bound=" << enumerate_channel_states(n_g, cfg.delta_s, c_cs)
              << " constructed=" << build_command_storage(cfg).state_count() << '\n';
  }
  return kOk;
}

int cmd_build(const Inputs& in) {
  const Components c = load(in);
  fs::create_directories(in.out);
  const fs::path dir(in.out);
  write_automaton_file(c.ac, (dir / "AC.fsa").string());
  write_automaton_file(c.oc, (dir / "OC.fsa").string());
  write_automaton_file(c.oc_t, (dir / "OCT.fsa").string());
  write_automaton_file(c.cc, (dir / "CC.fsa").string());
  write_automaton_file(c.plant.cs, (dir / "CS.fsa").string());
  write_automaton_file(c.plant.ce, (dir / "CE.fsa").string());
  write_automaton_file(c.plant.g_new, (dir / "G_new.fsa").string());
  write_automaton_file(c.monitor.automaton, (dir / "M.fsa").string());
  const std::string report = size_report(c);
  write_text_file((dir / "report.txt").string(), report);
  std::cout << report;
  return kOk;
}

int cmd_synthesize(const Inputs& in, const std::string& mode_text) {
  const auto mode = parse_mode(mode_text);
  if (!mode) throw CLI::ValidationError("--mode", "expected nonblocking or reachable");
  const Components c = load(in);
  const SynthesisProblem p = build_problem(c);
  std::cerr << "plant P: " << p.plant.state_count() << " states\n";
  const auto result = synthesize_supremal_attack(p, *mode);
  fs::create_directories(in.out);
  const fs::path dir(in.out);
  if (!result.supervisor) {
    write_text_file((dir / "certificate.txt").string(), "attack=none\n");
    std::cout << "no covert " << mode_name(*mode) << " attack exists\n";
    return kNoAttack;
  }
  write_automaton_file(*result.supervisor, (dir / "attack.fsa").string());
  std::string cert = "mode=" + std::string(mode_name(*mode)) + '\n' + certificate(p, *result.supervisor);
  write_text_file((dir / "certificate.txt").string(), cert);
  std::cout << cert;
  return kOk;
}

int cmd_verify(const Inputs& in, const std::string& attack_path) {
  const Components c = load(in);
  const Automaton a = read_automaton_file(attack_path);
  const SynthesisProblem p = build_problem(c);
  const auto report = validate_attack(a, p.constraint, p.alphabet);
  std::cout << certificate(p, a);
  return report.ok() ? kOk : kInvalid;
}

int cmd_export_dot(const std::string& path, const std::string& out) {
  const Automaton a = read_automaton_file(path);
  DotOptions options;
  if (a.find_state("{}")) options.highlight_state = "{}";
  const std::string dot = to_dot(a, options);
  if (out.empty()) {
    std::cout << dot;
  } else {
    write_text_file(out, dot);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert sensor-attack synthesis for networked discrete-event systems"};
  app.require_subcommand(1);

  std::string capacity_config;
  auto* capacity = app.add_subcommand("capacity", "print channel and storage capacities");
  capacity->add_option("--config", capacity_config, "system configuration")->required()->check(CLI::ExistingFile);

  Inputs build_in;
  auto* build = app.add_subcommand("build", "write every component automaton and a state-count report");
  add_inputs(build, build_in, true);

  Inputs synth_in;
  std::string mode = "nonblocking";
  auto* synth = app.add_subcommand("synthesize", "synthesize the supremal covert attack");
  add_inputs(synth, synth_in, true);
  synth->add_option("--mode", mode, "nonblocking or reachable")->check(CLI::IsMember({"nonblocking", "reachable"}));

  Inputs verify_in;
  std::string attack_path;
  auto* verify = app.add_subcommand("verify", "check an attack for validity, covertness and damage");
  add_inputs(verify, verify_in, false);
  verify->add_option("--attack", attack_path, "attack automaton")->required()->check(CLI::ExistingFile);

  std::string dot_in, dot_out;
  auto* dot = app.add_subcommand("export-dot", "render an automaton file as a DOT digraph");
  dot->add_option("file", dot_in, "automaton file")->required()->check(CLI::ExistingFile);
  dot->add_option("--out", dot_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*capacity) return cmd_capacity(capacity_config);
    if (*build) return cmd_build(build_in);
    if (*synth) return cmd_synthesize(synth_in, mode);
    if (*verify) return cmd_verify(verify_in, attack_path);
    if (*dot) return cmd_export_dot(dot_in, dot_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
