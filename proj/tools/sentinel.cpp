// sentinel -- supervisory-control sensor-attack synthesis and resilience CLI
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sentinel/dot.hpp"
#include "sentinel/fixtures.hpp"
#include "sentinel/json_io.hpp"
#include "sentinel/resilience.hpp"

using namespace sentinel;

namespace {

constexpr int kExitPositive = 0;
constexpr int kExitInput = 2;
constexpr int kExitNegative = 3;

struct CommonArgs {
    std::string plant_path, damage_path, supervisor_path, attack_path, out_path;
    int bound = 1;
    std::string protected_list;
    std::string mode = "weak";
    std::uint64_t max_patterns = 4096;
    std::uint64_t max_states = 2000000;
    int enum_bound = 5;
};

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

RunConfig make_config(const CommonArgs& a) {
    RunConfig cfg;
    cfg.bound = a.bound;
    cfg.max_patterns = a.max_patterns;
    cfg.max_states = a.max_states;
    cfg.enum_bound = a.enum_bound;
    cfg.guards_enabled = RunConfig::guards_from_env();
    cfg.validate();
    return cfg;
}

Supervisor load_supervisor(const BaseAlphabet& base, const std::string& path) {
    std::string text = read_file(path);
    auto j = nlohmann::json::parse(text);
    if (j.contains("entries")) return supervisor_map_from_json(base, text);
    return SupervisorFsa{fsa_from_json(text)};
}

int run_synth_attack(const CommonArgs& a) {
    RunConfig cfg = make_config(a);
    Fsa g = apply_protected(fsa_from_json(read_file(a.plant_path)), split_names(a.protected_list));
    Fsa d = apply_protected(fsa_from_json(read_file(a.damage_path)), split_names(a.protected_list));
    Supervisor v = load_supervisor(g.base, a.supervisor_path);
    auto attack = synthesize_attack(g, v, d, cfg);
    if (!attack) {
        std::cout << "no smart weak sensor attack exists\n";
        return kExitNegative;
    }
    std::string json = transducer_to_json(g.base, *attack);
    if (!a.out_path.empty()) write_file(a.out_path, json);
    std::cout << json;
    auto pair = find_risky_pair(g, v, d, cfg);
    if (pair) std::cout << pair->to_json(g.base);
    return kExitPositive;
}

int run_check_attack(const CommonArgs& a) {
    RunConfig cfg = make_config(a);
    Fsa g = apply_protected(fsa_from_json(read_file(a.plant_path)), split_names(a.protected_list));
    Fsa d = apply_protected(fsa_from_json(read_file(a.damage_path)), split_names(a.protected_list));
    Supervisor v = load_supervisor(g.base, a.supervisor_path);
    AttackTransducer t = transducer_from_json(g.base, read_file(a.attack_path));
    DamageMode mode = a.mode == "strong" ? DamageMode::Strong : DamageMode::Weak;
    SmartVerdict verdict = check_smart_attack(g, v, t, d, mode, cfg);
    std::cout << "covert: " << (verdict.covert ? "yes" : "no") << "\n"
              << "damage (" << a.mode << "): " << (verdict.damage ? "yes" : "no") << "\n"
              << "control feasible: " << (verdict.control_feasible ? "yes" : "no") << "\n"
              << "smart: " << (verdict.smart ? "yes" : "no") << "\n";
    return verdict.smart ? kExitPositive : kExitNegative;
}

int run_decide(const CommonArgs& a) {
    RunConfig cfg = make_config(a);
    Fsa g = fsa_from_json(read_file(a.plant_path));
    Fsa d = fsa_from_json(read_file(a.damage_path));
    Decision dec = decide_resilient(g, d, a.bound, split_names(a.protected_list), cfg);
    Fsa flagged = apply_protected(g, split_names(a.protected_list));
    std::string json = dec.to_json(flagged.base);
    if (!a.out_path.empty()) write_file(a.out_path, json);
    std::cout << json;
    return dec.exists ? kExitPositive : kExitNegative;
}

int run_verify_supervisor(const CommonArgs& a) {
    RunConfig cfg = make_config(a);
    Fsa g = apply_protected(fsa_from_json(read_file(a.plant_path)), split_names(a.protected_list));
    Fsa d = apply_protected(fsa_from_json(read_file(a.damage_path)), split_names(a.protected_list));
    Supervisor v = load_supervisor(g.base, a.supervisor_path);
    Report rep = validate_supervisor(g, v);
    for (const auto& issue : rep.issues) std::cout << issue << "\n";
    if (!rep.ok) {
        std::cout << "supervisor invalid\n";
        return kExitInput;
    }
    auto pair = find_risky_pair(g, v, d, cfg);
    if (pair) {
        std::cout << "attackable: a smart weak sensor attack exists\n" << pair->to_json(g.base);
        return kExitNegative;
    }
    std::cout << "resilient: no smart sensor attack exists against this supervisor\n";
    return kExitPositive;
}

int run_export_dot(const CommonArgs& a, const std::string& input) {
    std::string text = read_file(input);
    auto j = nlohmann::json::parse(text);
    std::string dot;
    if (j.contains("alphabet")) {
        dot = fsa_to_dot(fsa_from_json(text));
    } else if (j.contains("transitions") && !j["transitions"].empty() &&
               j["transitions"][0].size() == 4) {
        if (a.plant_path.empty())
            throw std::invalid_argument("--plant is required to resolve transducer event names");
        Fsa g = fsa_from_json(read_file(a.plant_path));
        dot = transducer_to_dot(g.base, transducer_from_json(g.base, text));
    } else {
        throw std::invalid_argument("unrecognized artifact file");
    }
    if (!a.out_path.empty())
        write_file(a.out_path, dot);
    else
        std::cout << dot;
    return kExitPositive;
}

int run_selftest() {
    int failures = 0;
    auto expect = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << what << "\n";
        if (!ok) ++failures;
    };
    RunConfig cfg;
    cfg.bound = 1;

    auto ex1 = fixtures::example1();
    auto attack = synthesize_attack(ex1.plant, Supervisor{ex1.supervisor}, ex1.damage, cfg);
    expect(attack.has_value(), "example 1: smart weak attack synthesized");
    if (attack) {
        auto verdict = check_smart_attack(ex1.plant, Supervisor{ex1.supervisor}, *attack,
                                          ex1.damage, DamageMode::Weak, cfg);
        expect(verdict.smart, "example 1: synthesized attack is smart (weak)");
    }

    auto ex2 = fixtures::example2();
    Decision d2 = decide_resilient(ex2.plant, ex2.damage, 1, {"c", "d"}, cfg);
    expect(d2.exists, "example 2: a resilient nonblocking supervisor exists");
    Fsa g2 = apply_protected(ex2.plant, {"c", "d"});
    Fsa dm2 = apply_protected(ex2.damage, {"c", "d"});
    expect(!find_risky_pair(g2, Supervisor{ex2.resilient}, dm2, cfg).has_value(),
           "example 2: the worked supervisor admits no attack");

    auto ex3 = fixtures::example3();
    Decision d3 = decide_resilient(ex3.plant, ex3.damage, 1, {}, cfg);
    expect(d3.exists, "example 3: decision is exists");
    expect(d3.supervisor && d3.supervisor->entries == ex3.extracted.entries,
           "example 3: extracted supervisor equals the worked five-entry map");

    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? kExitPositive : kExitNegative;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sensor-attack synthesis and resilient supervisor decision for "
                 "finite-state plants"};
    app.require_subcommand(1);
    CommonArgs args;

    auto add_common = [&](CLI::App* cmd, bool plant, bool damage, bool supervisor) {
        if (plant) cmd->add_option("--plant", args.plant_path, "plant automaton JSON")->required();
        if (damage)
            cmd->add_option("--damage", args.damage_path, "damage automaton JSON (marked = L_dam)")
                ->required();
        if (supervisor)
            cmd->add_option("--supervisor", args.supervisor_path,
                            "supervisor JSON (map or automaton)")
                ->required();
        cmd->add_option("--bound", args.bound, "fake-string length bound n (default 1)");
        cmd->add_option("--protected", args.protected_list,
                        "comma list of protected observable events");
        cmd->add_option("--max-patterns", args.max_patterns, "guard on |Gamma|");
        cmd->add_option("--max-states", args.max_states, "guard on construction sizes");
        cmd->add_option("--enum-bound", args.enum_bound, "bounded-check enumeration length");
    };

    auto* synth = app.add_subcommand("synth-attack", "synthesize a smart weak sensor attack");
    add_common(synth, true, true, true);
    synth->add_option("--out", args.out_path, "write the transducer JSON here");

    auto* check = app.add_subcommand("check-attack", "check the Def.-1 verdict for an attack");
    add_common(check, true, true, true);
    check->add_option("--attack", args.attack_path, "attack transducer JSON")->required();
    check->add_option("--mode", args.mode, "weak|strong (default weak)");

    auto* decide = app.add_subcommand("decide-resilient",
                                      "decide existence of a resilient nonblocking supervisor");
    add_common(decide, true, true, false);
    decide->add_option("--out", args.out_path, "write the decision JSON here");

    auto* verify = app.add_subcommand("verify-supervisor",
                                      "run attack synthesis against a given supervisor");
    add_common(verify, true, true, true);

    auto* dot = app.add_subcommand("export-dot", "render an artifact file as Graphviz");
    std::string dot_input;
    dot->add_option("input", dot_input, "artifact JSON file")->required();
    dot->add_option("--plant", args.plant_path, "plant JSON (for transducer event names)");
    dot->add_option("--out", args.out_path, "write the DOT file here");

    app.add_subcommand("selftest", "run the bundled worked examples");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth_attack(args);
        if (check->parsed()) return run_check_attack(args);
        if (decide->parsed()) return run_decide(args);
        if (verify->parsed()) return run_verify_supervisor(args);
        if (dot->parsed()) return run_export_dot(args, dot_input);
        return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
