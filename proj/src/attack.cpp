#include "sentinel/attack.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace sentinel {

std::vector<ObsWord> bounded_obs_strings(const BaseAlphabet& a, int n, const RunConfig& cfg) {
    if (n < 0) throw std::invalid_argument("bound n must be >= 0");
    std::vector<int> obs = a.observable_ids();
    std::uint64_t total = 1, layer = 1;
    for (int i = 1; i <= n; ++i) {
        layer *= obs.size() ? obs.size() : 1;
        total += obs.empty() ? 0 : layer;
        guard_states(cfg, total, "Delta_n enumeration");
    }
    std::vector<ObsWord> out{{}};
    std::size_t begin = 0;
    for (int len = 1; len <= n; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (int ev : obs) {
                ObsWord w = out[i];
                w.push_back(ev);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

const AttackTransducer::Edge* AttackTransducer::on_input(int state, int ev) const {
    for (const auto& e : edges)
        if (e.src == state && e.input == ev) return &e;
    return nullptr;
}

AttackTransducer identity_transducer(const BaseAlphabet& a) {
    AttackTransducer t;
    t.states = {"y0"};
    t.initial = 0;
    for (int ev : a.observable_ids()) t.edges.push_back({0, ev, {ev}, 0});
    return t;
}

Fsa observer(const Fsa& g) {
    std::vector<int> keep;
    for (int sym = 0; sym < g.syms.size(); ++sym)
        if (g.base.observable(g.syms.at(sym).comps.at(0).ev)) keep.push_back(sym);
    return project(g, keep);
}

Report validate_transducer(const BaseAlphabet& a, const AttackTransducer& t, int n,
                           const Fsa* plant) {
    Report rep;
    std::map<std::pair<int, int>, int> seen;
    for (const auto& e : t.edges) {
        if (e.src < 0 || e.src >= t.num_states() || e.dst < 0 || e.dst >= t.num_states()) {
            rep.fail("transducer edge endpoint out of range");
            continue;
        }
        if (e.input == -1) {
            if (!e.output.empty())
                rep.fail("eps-input transition with non-empty output at " + t.states[e.src]);
            if (e.dst != e.src)
                rep.fail("eps-input transition must self-loop at " + t.states[e.src]);
            continue;
        }
        if (!a.observable(e.input))
            rep.fail("transducer input '" + a.at(e.input).name + "' is unobservable");
        if (n >= 0 && static_cast<int>(e.output.size()) > n)
            rep.fail("transducer output exceeds the bound n=" + std::to_string(n));
        for (int ev : e.output)
            if (!a.observable(ev)) rep.fail("transducer output contains an unobservable event");
        auto key = std::make_pair(e.src, e.input);
        if (seen.count(key))
            rep.fail("two transitions share (state, input) at " + t.states[e.src] + "/" +
                     a.at(e.input).name + "; the attack map would be ill-defined");
        seen[key] = 1;
    }
    if (!rep.ok || !plant) return rep;

    // Input-completeness over P_o(L(G)): walk the plant observer against the
    // transducer's input graph.
    Fsa obs = observer(*plant);
    std::set<std::pair<int, int>> visited;
    std::deque<std::pair<int, int>> queue{{obs.initial, t.initial}};
    visited.insert({obs.initial, t.initial});
    while (!queue.empty()) {
        auto [o, y] = queue.front();
        queue.pop_front();
        for (const auto& [sym, targets] : obs.delta[o]) {
            int ev = obs.syms.at(sym).comps.at(0).ev;
            const auto* e = t.on_input(y, ev);
            if (!e) {
                rep.fail("transducer does not accept plant observation '" + a.at(ev).name +
                         "' at state " + t.states[y]);
                return rep;
            }
            for (int no : targets)
                if (visited.insert({no, e->dst}).second) queue.emplace_back(no, e->dst);
        }
    }
    return rep;
}

std::optional<ObsWord> transducer_output(const AttackTransducer& t, const ObsWord& input) {
    int y = t.initial;
    ObsWord out;
    for (int ev : input) {
        const auto* e = t.on_input(y, ev);
        if (!e) return std::nullopt;
        out.insert(out.end(), e->output.begin(), e->output.end());
        y = e->dst;
    }
    return out;
}

namespace {

/// Drives a supervisor automaton on attacker outputs. Undefined transitions
/// fall to a detached default state (pattern Sigma_uc); covert attacks never
/// reach it, so the extension is inert where Def. 1 applies.
struct SupervisorDrive {
    const SupervisorFsa* sf;
    Pattern uc = 0;

    int initial() const { return sf->fsa.initial; }
    Pattern pattern(int z) const { return z < 0 ? uc : enabled_pattern(*sf, z); }
    int advance(int z, const ObsWord& output) const {
        int cur = z;
        for (int ev : output) {
            if (cur < 0) return -1;
            cur = sf->fsa.step(cur, ev); // base table: sym id == event id
        }
        return cur;
    }
    std::string label(int z) const { return z < 0 ? "zdet" : sf->fsa.states[z]; }
};

} // namespace

Fsa attacked_closed_loop(const Fsa& g, const Supervisor& v, const AttackTransducer& a,
                         const RunConfig& cfg) {
    SupervisorFsa realized = std::holds_alternative<SupervisorFsa>(v)
                                 ? std::get<SupervisorFsa>(v)
                                 : supervisor_to_fsa(g.base, std::get<SupervisorMap>(v));
    SupervisorDrive drive{&realized, uncontrollable_mask(g.base)};

    Report tv = validate_transducer(g.base, a, -1, &g);
    if (!tv.ok)
        throw std::invalid_argument("invalid attack transducer: " + tv.issues.front());

    Fsa out;
    out.base = g.base;
    out.syms = g.syms;
    struct Cfg {
        int x, y, z;
    };
    std::map<std::tuple<int, int, int>, int> index;
    std::deque<Cfg> queue;
    auto get = [&](int x, int y, int z) {
        auto key = std::make_tuple(x, y, z);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = out.add_state("(" + g.states[x] + "," + a.states[y] + "," + drive.label(z) + ")",
                               g.marked[x] != 0);
        guard_states(cfg, index.size() + 1, "attacked closed loop");
        index.emplace(key, id);
        queue.push_back(Cfg{x, y, z});
        return id;
    };
    out.initial = get(g.initial, a.initial, drive.initial());
    while (!queue.empty()) {
        Cfg c = queue.front();
        queue.pop_front();
        int src = index.at(std::make_tuple(c.x, c.y, c.z));
        Pattern pat = drive.pattern(c.z);
        for (const auto& [sym, targets] : g.delta[c.x]) {
            int ev = g.syms.at(sym).comps.at(0).ev;
            if (!pattern_has(pat, ev)) continue;
            for (int nx : targets) {
                if (!g.base.observable(ev)) {
                    out.add_edge(src, sym, get(nx, c.y, c.z));
                    continue;
                }
                const auto* e = a.on_input(c.y, ev);
                if (!e) continue; // unreachable for input-complete transducers
                int nz = drive.advance(c.z, e->output);
                out.add_edge(src, sym, get(nx, e->dst, nz));
            }
        }
    }
    return out;
}

Fsa attack_output_language(const Fsa& g, const AttackTransducer& a) {
    // Product of the plant observer with the transducer; edges emit output
    // chunks. Chunk edges expand through fresh intermediate states; only
    // "end of chunk" states are marked (complete outputs A(o)).
    Fsa obs = observer(g);
    Fsa out;
    out.base = g.base;
    // Output alphabet: observable events.
    SymbolTable syms(SymbolKind::Base);
    std::vector<int> ev_to_sym(g.base.size(), -1);
    for (int ev : g.base.observable_ids())
        ev_to_sym[ev] = syms.intern(g.base, Symbol::event(ev));
    out.syms = syms;

    std::map<std::pair<int, int>, int> index;
    std::deque<std::pair<int, int>> queue;
    auto get = [&](int o, int y) {
        auto key = std::make_pair(o, y);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = out.add_state("(" + obs.states[o] + "," + a.states[y] + ")", true);
        index.emplace(key, id);
        queue.push_back(key);
        return id;
    };
    out.initial = get(obs.initial, a.initial);
    // eps-chunk edges recorded for a silent-closure pass afterwards.
    std::vector<std::pair<int, int>> silent;
    while (!queue.empty()) {
        auto [o, y] = queue.front();
        queue.pop_front();
        int src = index.at({o, y});
        for (const auto& [sym, targets] : obs.delta[o]) {
            int ev = obs.syms.at(sym).comps.at(0).ev;
            const auto* e = a.on_input(y, ev);
            if (!e) continue;
            for (int no : targets) {
                int dst = get(no, e->dst);
                if (e->output.empty()) {
                    silent.emplace_back(src, dst);
                } else {
                    int cur = src;
                    for (std::size_t i = 0; i < e->output.size(); ++i) {
                        int nxt = (i + 1 == e->output.size())
                                      ? dst
                                      : out.add_state("chunk" + std::to_string(out.num_states()),
                                                      false);
                        out.add_edge(cur, ev_to_sym[e->output[i]], nxt);
                        cur = nxt;
                    }
                }
            }
        }
    }
    if (silent.empty()) return out;
    // Silent closure: lift marks and outgoing edges along eps-chunk edges.
    std::vector<std::vector<int>> silent_adj(out.num_states());
    for (auto [s, d] : silent) silent_adj[s].push_back(d);
    std::vector<std::map<int, std::vector<int>>> original = out.delta;
    for (int s = 0; s < out.num_states(); ++s) {
        std::set<int> reach;
        std::deque<int> q{s};
        while (!q.empty()) {
            int cur = q.front();
            q.pop_front();
            for (int d : silent_adj[cur])
                if (reach.insert(d).second) q.push_back(d);
        }
        for (int d : reach) {
            if (out.marked[d]) out.marked[s] = 1;
            for (const auto& [sym, targets] : original[d])
                for (int t : targets) out.add_edge(s, sym, t);
        }
    }
    return out;
}

SmartVerdict check_smart_attack(const Fsa& g, const Supervisor& v, const AttackTransducer& a,
                                const Fsa& d, DamageMode mode, const RunConfig& cfg) {
    SmartVerdict verdict;
    Fsa loop = closed_loop(g, v);
    // Precondition: L_dam subseteq L(G) - L(V/G).
    if (!includes(g, d, false, true))
        throw std::invalid_argument("damage language is not contained in L(G)");
    {
        Fsa loop_all = loop;
        std::fill(loop_all.marked.begin(), loop_all.marked.end(), 1);
        Fsa overlap = meet(loop_all, d);
        if (!empty_marked(overlap))
            throw std::invalid_argument("damage language intersects L(V/G)");
    }

    // Covertness: A(P_o(L(G))) subseteq P_o(L(V/G)).
    Fsa outputs = attack_output_language(g, a);
    Fsa loop_obs = observer(loop);
    verdict.covert = includes(loop_obs, outputs, false, true);

    // Damage per mode on the attacked loop.
    Fsa att = attacked_closed_loop(g, v, a, cfg);
    Fsa att_all = att;
    std::fill(att_all.marked.begin(), att_all.marked.end(), 1);
    Fsa dam_hits = meet(att_all, d);
    bool weak = !empty_marked(dam_hits);
    if (mode == DamageMode::Weak) {
        verdict.damage = weak;
    } else {
        // Strong: L(V o A/G) == closure(L(V o A/G) cap L_dam).
        Fsa closure = prefix_close(dam_hits);
        verdict.damage = weak && includes_closed(closure, att) && includes_closed(att, closure);
    }

    // Control feasibility: observability of the attacked language w.r.t.
    // (L(G), P_o), verified on enumerations. Map-shaped transducers satisfy
    // it by construction; this confirms on bounded strings.
    verdict.control_feasible = true;
    auto strings = enumerate_language(att, cfg.enum_bound);
    std::map<ObsWord, std::vector<std::vector<int>>> by_obs;
    for (const auto& s : strings) {
        ObsWord po;
        for (int sym : s) {
            int ev = att.syms.at(sym).comps.at(0).ev;
            if (g.base.observable(ev)) po.push_back(ev);
        }
        by_obs[po].push_back(s);
    }
    for (const auto& [po, group] : by_obs) {
        for (const auto& s : group) {
            for (int sym = 0; sym < att.syms.size() && verdict.control_feasible; ++sym) {
                std::vector<int> ext = s;
                ext.push_back(sym);
                if (!member(att, ext)) continue;
                for (const auto& t : group) {
                    std::vector<int> text = t;
                    text.push_back(sym);
                    if (member(g, text) && !member(att, text)) {
                        verdict.control_feasible = false;
                        verdict.notes.push_back("observability violation on bounded enumeration");
                        break;
                    }
                }
            }
            if (!verdict.control_feasible) break;
        }
        if (!verdict.control_feasible) break;
    }

    verdict.smart = verdict.covert && verdict.damage && verdict.control_feasible;
    return verdict;
}

} // namespace sentinel
