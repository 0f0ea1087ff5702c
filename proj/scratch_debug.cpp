#include <iostream>

#include "../tests/oracles.hpp"
#include "sentinel/json_io.hpp"
#include "sentinel/resilience.hpp"

using namespace sentinel;

int main() {
    std::mt19937_64 rng(20240904);
    int done = 0;
    while (done < 50) {
        oracles::RandomSpec spec;
        spec.max_states = 4;
        spec.max_events = 3;
        spec.min_events = 2;
        Fsa g = oracles::random_plant(rng, spec);
        if (control_patterns(g.base).count() > 4) continue;
        for (int s = 0; s < g.num_states(); ++s) {
            std::map<int, std::vector<int>> fixed;
            for (auto& [sym, targets] : g.delta[s]) {
                std::vector<int> fwd;
                for (int t : targets)
                    if (t > s) fwd.push_back(t);
                if (!fwd.empty()) fixed[sym] = {fwd.front()};
            }
            g.delta[s] = fixed;
        }
        g.deterministic = true;
        std::set<ObsWord> nodes;
        for (const auto& s : oracles::plant_strings(g, g.num_states())) {
            ObsWord o;
            for (int sym : s) {
                int ev = g.syms.at(sym).comps.at(0).ev;
                if (g.base.observable(ev)) o.push_back(ev);
            }
            if (o.size() <= 3) nodes.insert(o);
        }
        if (nodes.size() > 6 || nodes.size() < 2) continue;
        auto lg = oracles::plant_strings(g, g.num_states());
        std::vector<std::vector<int>> words;
        for (const auto& w : lg)
            if (!w.empty() && rng() % 3 == 0) {
                words.push_back(w);
                if (words.size() == 2) break;
            }
        if (words.empty()) continue;
        Fsa d = recognizer(g.base, g.syms, words);
        ++done;
        try {
            Decision dec = decide_resilient(g, d, 1, {});
            std::cout << "instance " << done << ": " << (dec.exists ? "exists" : "not-exists")
                      << "\n";
        } catch (const std::exception& e) {
            std::cout << "instance " << done << " FAILED: " << e.what() << "\n";
            std::cout << "plant:\n" << fsa_to_json(g) << "damage:\n" << fsa_to_json(d);
            RunConfig cfg;
            cfg.bound = 1;
            Gamma gamma = control_patterns(g.base, cfg);
            GZeta gz = build_G_zeta(g, gamma, cfg);
            Fsa dn = build_D_nu(build_D_psi(build_D_iota(d, gamma, cfg), 1, cfg), gamma, cfg);
            HAutomaton h = build_H(gz, dn, gamma, cfg);
            HAutomaton hs = sup_conditionally_controllable(h, gz);
            PHAutomaton ph = build_PH(hs, cfg);
            auto omega = find_control_feasible(ph, hs, gz, gamma, g);
            if (omega) {
                std::cout << "omega states:\n";
                for (int s = 0; s < omega->fsa.num_states(); ++s)
                    std::cout << "  " << omega->fsa.states[s]
                              << (omega->fsa.marked[s] ? " (marked)" : "") << "\n";
                ExtractedSupervisor sup = extract_supervisor(*omega, ph, hs, gz, g.base);
                std::cout << "map:\n" << supervisor_map_to_json(g.base, sup.map);
                Fsa loop = closed_loop(g, Supervisor{sup.fsa});
                std::cout << "loop nonblocking: " << is_nonblocking(loop) << "\n";
                std::cout << "loop:\n" << fsa_to_json(trim(loop));
                Fsa cand = induced_candidate(gz, sup.fsa);
                Report crep = check_candidate_language(cand, hs, g, gz, 6);
                std::cout << "candidate check: " << (crep.ok ? "ok" : crep.issues.front()) << "\n";
            }
            return 1;
        }
    }
    return 0;
}
