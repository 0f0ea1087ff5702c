#include "sentinel/attack_synth.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sentinel {

namespace {

SupervisorFsa realize(const Fsa& g, const Supervisor& v) {
    if (std::holds_alternative<SupervisorFsa>(v)) return std::get<SupervisorFsa>(v);
    return supervisor_to_fsa(g.base, std::get<SupervisorMap>(v));
}

/// Fake strings an attacker may substitute for an intercepted observable
/// event: protected events are relayed verbatim, anything else maps into
/// Delta_n minus the single-letter protected strings.
std::vector<ObsWord> fake_choices(const BaseAlphabet& base, int ev,
                                  const std::vector<ObsWord>& delta_n) {
    if (base.shielded(ev)) return {{ev}};
    std::vector<ObsWord> out;
    for (const auto& u : delta_n) {
        if (u.size() == 1 && base.shielded(u[0])) continue;
        out.push_back(u);
    }
    return out;
}

int drive_word(const Fsa& det, int from, const ObsWord& word) {
    int cur = from;
    for (int ev : word) {
        if (cur < 0) return -1;
        int sym = det.syms.find(Symbol::event(ev));
        cur = sym < 0 ? -1 : det.step(cur, sym);
    }
    return cur;
}

} // namespace

std::string RiskyPair::to_json(const BaseAlphabet& base) const {
    nlohmann::ordered_json out;
    out["s"] = event_string_display(base, damage_string);
    out["decomposition"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i + 1 < segments.size()) {
            out["decomposition"].push_back(nlohmann::ordered_json::array(
                {event_string_display(base, segments[i]),
                 base.at(observables[i]).name}));
        } else {
            out["decomposition"].push_back(
                nlohmann::ordered_json::array({event_string_display(base, segments[i])}));
        }
    }
    out["t"] = nlohmann::ordered_json::array();
    for (const auto& nu : fakes) out["t"].push_back(event_string_display(base, nu));
    return out.dump(2) + "\n";
}

std::optional<RiskyPair> find_risky_pair(const Fsa& g, const Supervisor& v, const Fsa& d,
                                         const RunConfig& cfg) {
    if (!(g.base == d.base)) throw std::invalid_argument("plant/damage alphabet mismatch");
    if (!includes(g, d, false, true))
        throw std::invalid_argument("damage language is not contained in L(G)");
    SupervisorFsa sup = realize(g, v);
    {
        Report rep = validate_supervisor(g, Supervisor{sup});
        if (!rep.ok) throw std::invalid_argument("invalid supervisor: " + rep.issues.front());
    }

    Fsa dam = complete(trim(d), "wsink");           // L(D) = Sigma^*
    Fsa clobs = determinize(observer(closed_loop(g, Supervisor{sup})));
    std::vector<ObsWord> delta_n = bounded_obs_strings(g.base, cfg.bound, cfg);

    guard_states(cfg,
                 static_cast<std::uint64_t>(g.num_states()) * dam.num_states() *
                     sup.fsa.num_states() * clobs.num_states(),
                 "risky-pair search");

    struct Node {
        int x, w, z, c;
        int parent;       // index into nodes, -1 for root
        int event;        // plant event taken to reach this node
        int fake;         // index into delta_n for the chunk, -1 for unobservable
    };
    std::vector<Node> nodes;
    std::map<std::tuple<int, int, int, int>, int> seen;
    std::deque<int> queue;
    auto push = [&](int x, int w, int z, int c, int parent, int event, int fake) {
        auto key = std::make_tuple(x, w, z, c);
        if (seen.count(key)) return -1;
        int id = static_cast<int>(nodes.size());
        nodes.push_back({x, w, z, c, parent, event, fake});
        seen.emplace(key, id);
        queue.push_back(id);
        return id;
    };
    push(g.initial, dam.initial, sup.fsa.initial, clobs.initial, -1, -1, -1);

    std::map<ObsWord, int> fake_index;
    for (std::size_t i = 0; i < delta_n.size(); ++i) fake_index[delta_n[i]] = static_cast<int>(i);

    int goal = -1;
    while (!queue.empty() && goal < 0) {
        int id = queue.front();
        queue.pop_front();
        Node cur = nodes[id];
        if (dam.marked[cur.w]) {
            goal = id;
            break;
        }
        Pattern pat = enabled_pattern(sup, cur.z);
        for (const auto& [sym, targets] : g.delta[cur.x]) {
            int ev = g.syms.at(sym).comps.at(0).ev;
            if (!pattern_has(pat, ev)) continue;
            for (int nx : targets) {
                int nw = dam.step(cur.w, sym);
                if (nw < 0) continue; // unreachable: dam is complete
                if (!g.base.observable(ev)) {
                    push(nx, nw, cur.z, cur.c, id, ev, -1);
                    continue;
                }
                for (const ObsWord& nu : fake_choices(g.base, ev, delta_n)) {
                    int nc = drive_word(clobs, cur.c, nu);
                    if (nc < 0) continue; // fake leaves P_o(L(V/G))
                    int nz = cur.z;
                    for (int fe : nu) nz = sup.fsa.step(nz, fe);
                    if (nz < 0)
                        throw std::logic_error("supervisor rejects an observation the closed "
                                               "loop accepts");
                    push(nx, nw, nz, nc, id, ev, fake_index.at(nu));
                }
            }
        }
    }
    if (goal < 0) return std::nullopt;

    // Reconstruct s and t from the parent chain.
    std::vector<std::pair<int, int>> steps; // (event, fake index or -1)
    for (int id = goal; nodes[id].parent >= 0; id = nodes[id].parent)
        steps.emplace_back(nodes[id].event, nodes[id].fake);
    std::reverse(steps.begin(), steps.end());

    RiskyPair pair;
    std::vector<int> segment;
    for (auto [ev, fake] : steps) {
        pair.damage_string.push_back(ev);
        if (fake < 0) {
            segment.push_back(ev);
        } else {
            pair.segments.push_back(segment);
            segment.clear();
            pair.observables.push_back(ev);
            pair.fakes.push_back(delta_n[fake]);
        }
    }
    pair.segments.push_back(segment); // u_{r+1}
    return pair;
}

PsiAutomaton build_psi(const Fsa& g, const SupervisorFsa& s, const Fsa& d, int n,
                       const AttackTransducer* attack, const RunConfig& cfg) {
    AttackTransducer universal;
    std::vector<ObsWord> delta_n = bounded_obs_strings(g.base, n, cfg);
    if (!attack) {
        // Single-state transducer with every admissible attack move.
        universal.states = {"y0"};
        universal.initial = 0;
        for (int ev : g.base.observable_ids())
            for (const ObsWord& u : fake_choices(g.base, ev, delta_n))
                universal.edges.push_back({0, ev, u, 0});
        attack = &universal;
    }

    Fsa dam = complete(trim(d), "wsink");

    PsiAutomaton psi;
    psi.fsa.base = g.base;
    psi.fsa.syms = SymbolTable(SymbolKind::SigmaN);
    // Canonical Sigma_N enumeration: events in base order; observable ones
    // fan out over Delta_n in shortlex order.
    std::map<std::pair<int, ObsWord>, int> sym_of; // (event, fake) -> symbol id
    for (int ev = 0; ev < g.base.size(); ++ev) {
        if (!g.base.observable(ev)) {
            int id = psi.fsa.syms.intern(
                g.base, Symbol::tuple({SymComp::event(ev), SymComp::eps(), SymComp::eps()}));
            sym_of[{ev, {}}] = id;
            if (static_cast<int>(psi.controllable_sym.size()) <= id)
                psi.controllable_sym.resize(id + 1, 0);
        } else {
            for (const ObsWord& u : delta_n) {
                int id = psi.fsa.syms.intern(
                    g.base,
                    Symbol::tuple({SymComp::event(ev), SymComp::event(ev), SymComp::obs(u)}));
                sym_of[{ev, u}] = id;
                if (static_cast<int>(psi.controllable_sym.size()) <= id)
                    psi.controllable_sym.resize(id + 1, 0);
                psi.controllable_sym[id] = 1;
            }
        }
    }

    guard_states(cfg,
                 static_cast<std::uint64_t>(g.num_states()) * s.fsa.num_states() *
                     attack->num_states() * dam.num_states(),
                 "Psi product");

    std::map<std::tuple<int, int, int, int>, int> index;
    std::deque<std::tuple<int, int, int, int>> queue;
    auto get = [&](int x, int z, int y, int w) {
        auto key = std::make_tuple(x, z, y, w);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        bool marked = g.marked[x] && dam.marked[w]; // Z_m = Z, Y_m = Y
        int id = psi.fsa.add_state("(" + g.states[x] + "," + s.fsa.states[z] + "," +
                                       attack->states[y] + "," + dam.states[w] + ")",
                                   marked);
        psi.plant_of.push_back(x);
        psi.sup_of.push_back(z);
        psi.trans_of.push_back(y);
        psi.damage_of.push_back(w);
        psi.damage_marked.push_back(dam.marked[w]);
        index.emplace(key, id);
        queue.push_back(key);
        return id;
    };
    psi.fsa.initial = get(g.initial, s.fsa.initial, attack->initial, dam.initial);

    while (!queue.empty()) {
        auto [x, z, y, w] = queue.front();
        queue.pop_front();
        int src = index.at(std::make_tuple(x, z, y, w));
        Pattern pat = enabled_pattern(s, z);
        for (const auto& [gsym, targets] : g.delta[x]) {
            int ev = g.syms.at(gsym).comps.at(0).ev;
            if (!pattern_has(pat, ev)) continue; // lambda condition 1
            int nw = dam.step(w, gsym);
            for (int nx : targets) {
                if (!g.base.observable(ev)) {
                    psi.fsa.add_edge(src, sym_of.at({ev, {}}), get(nx, z, y, nw));
                    continue;
                }
                for (const auto& e : attack->edges) {
                    if (e.src != y || e.input != ev) continue;
                    int nz = z;
                    bool ok = true;
                    for (int fe : e.output) {
                        nz = s.fsa.step(nz, fe);
                        if (nz < 0) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) continue; // lambda condition 2: delta(z, u) defined
                    auto sit = sym_of.find({ev, e.output});
                    if (sit == sym_of.end()) continue; // output longer than n
                    psi.fsa.add_edge(src, sit->second, get(nx, nz, e.dst, nw));
                }
            }
        }
    }
    return psi;
}

std::vector<int> PsiAutomaton::pi(const std::vector<int>& word) const {
    std::vector<int> out;
    for (int sym : word) out.push_back(fsa.syms.at(sym).comps.at(0).ev);
    return out;
}

ObsWord PsiAutomaton::varpi(const std::vector<int>& word) const {
    ObsWord out;
    for (int sym : word) {
        const SymComp& u = fsa.syms.at(sym).comps.at(2);
        if (u.kind == CompKind::Ev) out.push_back(u.ev);
        if (u.kind == CompKind::Obs) out.insert(out.end(), u.seq.begin(), u.seq.end());
    }
    return out;
}

std::optional<AttackTransducer> synthesize_attack(const Fsa& g, const Supervisor& v, const Fsa& d,
                                                  const RunConfig& cfg) {
    auto pair = find_risky_pair(g, v, d, cfg);
    if (!pair) return std::nullopt;
    SupervisorFsa sup = realize(g, v);
    Fsa clobs = determinize(observer(closed_loop(g, Supervisor{sup})));
    Fsa obsg = determinize(observer(g));

    const auto& sigma = pair->observables; // planned inputs
    const auto& nu = pair->fakes;          // planned outputs
    int r = static_cast<int>(sigma.size());

    // Output-side observer states along the planned prefix.
    std::vector<int> planned_c(r + 1);
    planned_c[0] = clobs.initial;
    for (int i = 0; i < r; ++i) {
        planned_c[i + 1] = drive_word(clobs, planned_c[i], nu[i]);
        if (planned_c[i + 1] < 0)
            throw std::logic_error("risky-pair fakes leave the closed-loop observations");
    }

    // Transducer states: (obsG state, mode). mode: 0..r planned, r+1+c echo
    // at clobs state c, -1 frozen.
    AttackTransducer t;
    std::map<std::tuple<int, int>, int> index;
    std::deque<std::tuple<int, int>> queue;
    auto mode_label = [&](int mode) -> std::string {
        if (mode < 0) return "frz";
        if (mode <= r) return "p" + std::to_string(mode);
        return "e" + std::to_string(mode - r - 1);
    };
    auto get = [&](int o, int mode) {
        auto key = std::make_tuple(o, mode);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = t.num_states();
        t.states.push_back("y" + std::to_string(id) + "_" + mode_label(mode));
        index.emplace(key, id);
        queue.push_back(key);
        return id;
    };
    t.initial = get(obsg.initial, 0);
    while (!queue.empty()) {
        auto [o, mode] = queue.front();
        queue.pop_front();
        int src = index.at(std::make_tuple(o, mode));
        for (const auto& [sym, targets] : obsg.delta[o]) {
            int ev = obsg.syms.at(sym).comps.at(0).ev;
            int no = obsg.step(o, sym);
            if (mode >= 0 && mode < r && ev == sigma[mode]) {
                t.edges.push_back({src, ev, nu[mode], get(no, mode + 1)});
                continue;
            }
            // Deviation, echo or frozen continuation.
            int c = -1;
            if (mode >= 0 && mode <= r) c = planned_c[mode];
            if (mode > r) c = mode - r - 1;
            if (c >= 0) {
                int nc = drive_word(clobs, c, {ev});
                if (nc >= 0) {
                    t.edges.push_back({src, ev, {ev}, get(no, r + 1 + nc)});
                    continue;
                }
            }
            // Frozen: protected events must still be relayed verbatim.
            ObsWord out = g.base.shielded(ev) ? ObsWord{ev} : ObsWord{};
            t.edges.push_back({src, ev, out, get(no, -1)});
        }
    }

    SmartVerdict verdict = check_smart_attack(g, Supervisor{sup}, t, d, DamageMode::Weak, cfg);
    if (!verdict.smart)
        throw std::logic_error("synthesized attack failed the Def.-1 verdict; this is a bug");
    return t;
}

Report verify_U_conditions(const Fsa& u_candidate, const PsiAutomaton& psi, const Fsa& g,
                           const SupervisorFsa& s, int bound) {
    Report rep;
    if (!(u_candidate.syms == psi.fsa.syms)) {
        rep.fail("U candidate is not over Sigma_N");
        return rep;
    }
    if (!includes_closed(psi.fsa, u_candidate)) rep.fail("U is not a sublanguage of L(Psi)");

    // Weak nonblocking: pi(U) cap L_m(D) != empty, i.e. U x Psi reaches a
    // damage-marked Psi state. Exact product check.
    {
        Fsa psi_dam = psi.fsa;
        for (int i = 0; i < psi_dam.num_states(); ++i) psi_dam.marked[i] = psi.damage_marked[i];
        Fsa u_all = u_candidate;
        std::fill(u_all.marked.begin(), u_all.marked.end(), 1);
        if (empty_marked(meet(u_all, psi_dam))) rep.fail("weak nonblocking fails: pi(U) misses L_dam");
    }

    auto strings = enumerate_language(u_candidate, bound);

    // Controllability w.r.t. Sigma_{N,uc}.
    for (const auto& w : strings) {
        for (int sym = 0; sym < psi.fsa.syms.size(); ++sym) {
            if (sym < static_cast<int>(psi.controllable_sym.size()) && psi.controllable_sym[sym])
                continue;
            std::vector<int> ext = w;
            ext.push_back(sym);
            if (member(psi.fsa, ext) && !member(u_candidate, ext)) {
                rep.fail("controllability fails: an uncontrollable Sigma_N letter is disabled");
                break;
            }
        }
        if (!rep.ok) break;
    }

    // Extended controllability: pi of the enabled set equals
    // En_{L(G)}(pi(s)) cap En_S(varpi(s)).
    for (const auto& w : strings) {
        std::set<int> enabled_pi;
        for (int sym = 0; sym < u_candidate.syms.size(); ++sym) {
            std::vector<int> ext = w;
            ext.push_back(sym);
            if (member(u_candidate, ext))
                enabled_pi.insert(u_candidate.syms.at(sym).comps.at(0).ev);
        }
        std::vector<int> base_word = psi.pi(w);
        std::set<int> expect;
        ObsWord fake = psi.varpi(w);
        int z = s.fsa.initial;
        for (int ev : fake) z = s.fsa.step(z, ev);
        if (z < 0) {
            rep.fail("varpi(s) leaves L(S)");
            break;
        }
        Pattern pat = enabled_pattern(s, z);
        for (int ev = 0; ev < g.base.size(); ++ev) {
            std::vector<int> ext = base_word;
            ext.push_back(ev); // base table: sym id == event id in g
            if (member(g, ext) && pattern_has(pat, ev)) expect.insert(ev);
        }
        if (enabled_pi != expect) {
            rep.fail("extended controllability fails after '" +
                     event_string_display(g.base, base_word) + "'");
            break;
        }
    }

    // Extended observability: P_o(pi(.))-equal strings share varpi images.
    std::map<ObsWord, ObsWord> seen;
    for (const auto& w : strings) {
        ObsWord po;
        for (int ev : psi.pi(w))
            if (g.base.observable(ev)) po.push_back(ev);
        ObsWord out = psi.varpi(w);
        auto it = seen.find(po);
        if (it == seen.end()) {
            seen.emplace(po, out);
        } else if (it->second != out) {
            rep.fail("extended observability fails: P_o(pi)-equal strings diverge in varpi");
            break;
        }
    }
    return rep;
}

} // namespace sentinel
