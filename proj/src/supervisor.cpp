#include "sentinel/supervisor.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace sentinel {

Gamma control_patterns(const BaseAlphabet& a, const RunConfig& cfg) {
    return Gamma(a, cfg.guards_enabled ? cfg.max_patterns : 0);
}

SupervisorFsa supervisor_to_fsa(const BaseAlphabet& base, const SupervisorMap& v) {
    Pattern uc = uncontrollable_mask(base);
    if ((v.fallback & uc) != uc)
        throw std::invalid_argument("default pattern drops an uncontrollable event");
    for (const auto& [obs, pat] : v.entries) {
        if ((pat & uc) != uc)
            throw std::invalid_argument("a supervisor pattern drops an uncontrollable event");
        for (int ev : obs)
            if (!base.observable(ev))
                throw std::invalid_argument("supervisor key contains an unobservable event");
    }

    Fsa s;
    s.base = base;
    s.syms = SymbolTable::base(base);

    // Prefix tree over the entry keys; everything else collapses to a sink
    // holding the default pattern.
    std::map<ObsWord, int> node_of;
    std::deque<ObsWord> nodes;
    auto ensure = [&](const ObsWord& w) {
        auto it = node_of.find(w);
        if (it != node_of.end()) return it->second;
        std::string label;
        for (int ev : w) label += base.at(ev).name;
        if (label.empty()) label = "z0";
        int id = s.add_state(label, true);
        node_of.emplace(w, id);
        nodes.push_back(w);
        return id;
    };
    for (const auto& [obs, pat] : v.entries) {
        ObsWord prefix;
        ensure(prefix);
        for (int ev : obs) {
            prefix.push_back(ev);
            ensure(prefix);
        }
    }
    ObsWord root;
    s.initial = ensure(root);
    int sink = s.add_state("zout", true);

    auto pattern_at = [&](const ObsWord& w) { return v.at(w); };

    for (const auto& [w, id] : node_of) {
        Pattern pat = pattern_at(w);
        for (int ev = 0; ev < base.size(); ++ev) {
            if (!pattern_has(pat, ev)) continue;
            if (!base.observable(ev)) {
                s.add_edge(id, ev, id);
            } else {
                ObsWord next = w;
                next.push_back(ev);
                auto it = node_of.find(next);
                s.add_edge(id, ev, it == node_of.end() ? sink : it->second);
            }
        }
    }
    // Sink: default pattern forever.
    for (int ev = 0; ev < base.size(); ++ev)
        if (pattern_has(v.fallback, ev)) s.add_edge(sink, ev, sink);
    return SupervisorFsa{std::move(s)};
}

Pattern enabled_pattern(const SupervisorFsa& s, int state) {
    Pattern p = 0;
    for (const auto& [sym, targets] : s.fsa.delta.at(state)) {
        const Symbol& symbol = s.fsa.syms.at(sym);
        p |= Pattern{1} << symbol.comps.at(0).ev;
    }
    return p;
}

namespace {

Fsa closed_loop_fsa(const Fsa& g, const SupervisorFsa& s) {
    if (!(g.base == s.fsa.base))
        throw std::invalid_argument("closed_loop: plant/supervisor alphabet mismatch");
    // meet(S, G) with L_m = L(S) cap L_m(G): S has all states marked.
    Fsa product = meet(s.fsa, g);
    // meet marks pairs with both sides marked; S is all-marked, so marking is
    // inherited from G already.
    return product;
}

} // namespace

Fsa closed_loop(const Fsa& g, const Supervisor& v) {
    if (std::holds_alternative<SupervisorFsa>(v))
        return closed_loop_fsa(g, std::get<SupervisorFsa>(v));

    const SupervisorMap& m = std::get<SupervisorMap>(v);
    // Direct product of plant states with observation strings; the
    // observation component collapses outside the key prefix-tree.
    struct Cfg {
        int x;
        ObsWord obs;   // meaningful while inside the prefix tree
        bool inside;
    };
    std::set<ObsWord> tree;
    for (const auto& [obs, pat] : m.entries) {
        ObsWord prefix;
        tree.insert(prefix);
        for (int ev : obs) {
            prefix.push_back(ev);
            tree.insert(prefix);
        }
    }
    tree.insert(ObsWord{});

    Fsa out;
    out.base = g.base;
    out.syms = g.syms;
    std::map<std::pair<int, ObsWord>, int> index; // obs = {} with inside=false keyed specially
    auto key = [&](int x, const ObsWord& obs, bool inside) {
        ObsWord k = obs;
        if (!inside) k = {-1};
        return std::make_pair(x, k);
    };
    std::deque<Cfg> queue;
    auto get = [&](int x, const ObsWord& obs, bool inside) {
        auto k = key(x, obs, inside);
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        std::string label = "(" + g.states[x] + ",";
        if (inside) {
            for (int ev : obs) label += g.base.at(ev).name;
        } else {
            label += "*";
        }
        label += ")";
        int id = out.add_state(label, g.marked[x] != 0);
        index.emplace(k, id);
        queue.push_back(Cfg{x, obs, inside});
        return id;
    };
    out.initial = get(g.initial, {}, true);
    while (!queue.empty()) {
        Cfg cfg = queue.front();
        queue.pop_front();
        int src = index.at(key(cfg.x, cfg.obs, cfg.inside));
        Pattern pat = cfg.inside ? m.at(cfg.obs) : m.fallback;
        for (const auto& [sym, targets] : g.delta[cfg.x]) {
            int ev = g.syms.at(sym).comps.at(0).ev;
            if (!pattern_has(pat, ev)) continue;
            for (int nx : targets) {
                if (!g.base.observable(ev)) {
                    out.add_edge(src, sym, get(nx, cfg.obs, cfg.inside));
                } else {
                    ObsWord next_obs = cfg.obs;
                    bool inside = cfg.inside;
                    if (inside) {
                        next_obs.push_back(ev);
                        if (!tree.count(next_obs)) {
                            inside = false;
                            next_obs.clear();
                        }
                    }
                    out.add_edge(src, sym, get(nx, next_obs, inside));
                }
            }
        }
    }
    return out;
}

bool is_nonblocking(const Fsa& a) { return is_coreachable(a); }

namespace {

void check_uncontrollable_preservation(const Fsa& g, const Fsa& loop, Report& rep) {
    // For every reachable closed-loop string s and uncontrollable sigma with
    // s.sigma in L(G), s.sigma must stay in the loop. State-wise over the
    // synchronized (loop, plant) pairs.
    struct P {
        int l, x;
    };
    std::map<std::pair<int, int>, char> seen;
    std::deque<P> queue;
    queue.push_back({loop.initial, g.initial});
    seen[{loop.initial, g.initial}] = 1;
    while (!queue.empty()) {
        P p = queue.front();
        queue.pop_front();
        for (const auto& [sym, targets] : g.delta[p.x]) {
            int ev = g.syms.at(sym).comps.at(0).ev;
            const auto* lt = loop.successors(p.l, sym);
            if (!g.base.controllable(ev) && !lt) {
                rep.fail("uncontrollable event '" + g.base.at(ev).name +
                         "' feasible in the plant is disabled at loop state " +
                         loop.states[p.l]);
                return;
            }
            if (!lt) continue;
            for (int nx : targets)
                for (int nl : *lt)
                    if (!seen.count({nl, nx})) {
                        seen[{nl, nx}] = 1;
                        queue.push_back({nl, nx});
                    }
        }
    }
}

void check_fsa_shape(const Fsa& g, const SupervisorFsa& s, Report& rep) {
    const Fsa& f = s.fsa;
    for (int z = 0; z < f.num_states(); ++z)
        if (!f.marked[z]) rep.fail("supervisor state " + f.states[z] + " is unmarked");
    for (int z = 0; z < f.num_states(); ++z)
        for (const auto& [sym, targets] : f.delta[z]) {
            int ev = f.syms.at(sym).comps.at(0).ev;
            if (!f.base.observable(ev))
                for (int t : targets)
                    if (t != z)
                        rep.fail("unobservable event '" + f.base.at(ev).name +
                                 "' does not self-loop at supervisor state " + f.states[z]);
            if (targets.size() > 1)
                rep.fail("supervisor is nondeterministic at state " + f.states[z]);
        }
    if (!rep.ok) return;
    // Observation determinism: subset construction over observations must
    // yield singleton reachable sets.
    std::map<std::set<int>, char> seen;
    std::deque<std::set<int>> queue;
    auto closure = [&](std::set<int> states) {
        std::deque<int> q(states.begin(), states.end());
        while (!q.empty()) {
            int z = q.front();
            q.pop_front();
            for (const auto& [sym, targets] : f.delta[z]) {
                int ev = f.syms.at(sym).comps.at(0).ev;
                if (f.base.observable(ev)) continue;
                for (int t : targets)
                    if (states.insert(t).second) q.push_back(t);
            }
        }
        return states;
    };
    std::set<int> init = closure({f.initial});
    queue.push_back(init);
    seen[init] = 1;
    while (!queue.empty()) {
        std::set<int> cur = queue.front();
        queue.pop_front();
        if (cur.size() > 1) {
            rep.fail("observation-identical strings reach distinct supervisor states");
            return;
        }
        std::map<int, std::set<int>> post;
        for (int z : cur)
            for (const auto& [sym, targets] : f.delta[z]) {
                int ev = f.syms.at(sym).comps.at(0).ev;
                if (!f.base.observable(ev)) continue;
                post[sym].insert(targets.begin(), targets.end());
            }
        for (auto& [sym, nxt] : post) {
            std::set<int> c = closure(nxt);
            if (!seen.count(c)) {
                seen[c] = 1;
                queue.push_back(c);
            }
        }
    }
    (void)g;
}

} // namespace

Report validate_supervisor(const Fsa& g, const Supervisor& v) {
    Report rep;
    if (std::holds_alternative<SupervisorFsa>(v)) {
        const auto& s = std::get<SupervisorFsa>(v);
        if (!(g.base == s.fsa.base)) {
            rep.fail("plant/supervisor alphabet mismatch");
            return rep;
        }
        check_fsa_shape(g, s, rep);
        if (!rep.ok) return rep;
    } else {
        const auto& m = std::get<SupervisorMap>(v);
        Pattern uc = uncontrollable_mask(g.base);
        if ((m.fallback & uc) != uc) rep.fail("default pattern drops an uncontrollable event");
        for (const auto& [obs, pat] : m.entries)
            if ((pat & uc) != uc)
                rep.fail("pattern for an entry drops an uncontrollable event");
        if (!rep.ok) return rep;
    }
    Fsa loop = closed_loop(g, v);
    check_uncontrollable_preservation(g, loop, rep);
    if (rep.ok) {
        // Informational: L_m(G)-closedness of the closed-loop marked language.
        Fsa closure = prefix_close(loop);
        Fsa gm = g; // marked language of G
        Fsa inter = meet(closure, gm);
        if (!includes(loop, inter, true, true))
            rep.issues.push_back("note: closed-loop marked language is not L_m(G)-closed");
    }
    return rep;
}

} // namespace sentinel
