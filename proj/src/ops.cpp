#include "sentinel/ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace sentinel {

namespace {

std::string set_label(const Fsa& a, const std::set<int>& states) {
    std::string out = "{";
    bool first = true;
    for (int s : states) {
        if (!first) out += ",";
        out += a.states[s];
        first = false;
    }
    out += "}";
    return out;
}

bool intersects_marked(const Fsa& a, const std::set<int>& states) {
    for (int s : states)
        if (a.marked[s]) return true;
    return false;
}

} // namespace

Fsa meet(const Fsa& a, const Fsa& b) {
    if (!(a.base == b.base) || !(a.syms == b.syms))
        throw std::invalid_argument("meet: alphabet mismatch");
    Fsa out;
    out.base = a.base;
    out.syms = a.syms;
    std::map<std::pair<int, int>, int> index;
    std::deque<std::pair<int, int>> queue;
    auto get = [&](int sa, int sb) {
        auto it = index.find({sa, sb});
        if (it != index.end()) return it->second;
        int id = out.add_state("(" + a.states[sa] + "," + b.states[sb] + ")",
                               a.marked[sa] && b.marked[sb]);
        index.emplace(std::make_pair(sa, sb), id);
        queue.emplace_back(sa, sb);
        return id;
    };
    out.initial = get(a.initial, b.initial);
    while (!queue.empty()) {
        auto [sa, sb] = queue.front();
        queue.pop_front();
        int src = index.at({sa, sb});
        for (const auto& [sym, ta] : a.delta[sa]) {
            const auto* tb = b.successors(sb, sym);
            if (!tb) continue;
            for (int na : ta)
                for (int nb : *tb) out.add_edge(src, sym, get(na, nb));
        }
    }
    return out;
}

Fsa determinize(const Fsa& n) {
    Fsa out;
    out.base = n.base;
    out.syms = n.syms;
    std::map<std::set<int>, int> index;
    std::deque<std::set<int>> queue;
    auto get = [&](const std::set<int>& subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        int id = out.add_state(set_label(n, subset), intersects_marked(n, subset));
        index.emplace(subset, id);
        queue.push_back(subset);
        return id;
    };
    out.initial = get({n.initial});
    while (!queue.empty()) {
        std::set<int> subset = queue.front();
        queue.pop_front();
        int src = index.at(subset);
        std::map<int, std::set<int>> post;
        for (int s : subset)
            for (const auto& [sym, targets] : n.delta[s])
                post[sym].insert(targets.begin(), targets.end());
        for (const auto& [sym, tgt] : post) out.add_edge(src, sym, get(tgt));
    }
    out.deterministic = true;
    return out;
}

Fsa project(const Fsa& a, const std::vector<int>& keep) {
    std::vector<char> kept(a.syms.size(), 0);
    for (int sym : keep) {
        if (sym < 0 || sym >= a.syms.size())
            throw std::invalid_argument("project: symbol id out of range");
        kept[sym] = 1;
    }
    // Sub-table of the kept symbols, preserving order; remap ids.
    Fsa out;
    out.base = a.base;
    out.syms = SymbolTable(a.syms.kind());
    std::vector<int> remap(a.syms.size(), -1);
    for (int sym = 0; sym < a.syms.size(); ++sym)
        if (kept[sym]) remap[sym] = out.syms.intern(a.base, a.syms.at(sym));

    // Erased symbols act as silent moves: subset construction over
    // silent-closures.
    auto closure = [&](std::set<int> states) {
        std::deque<int> queue(states.begin(), states.end());
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (const auto& [sym, targets] : a.delta[s]) {
                if (kept[sym]) continue;
                for (int t : targets)
                    if (states.insert(t).second) queue.push_back(t);
            }
        }
        return states;
    };

    std::map<std::set<int>, int> index;
    std::deque<std::set<int>> queue;
    auto get = [&](const std::set<int>& subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        int id = out.add_state(set_label(a, subset), intersects_marked(a, subset));
        index.emplace(subset, id);
        queue.push_back(subset);
        return id;
    };
    out.initial = get(closure({a.initial}));
    while (!queue.empty()) {
        std::set<int> subset = queue.front();
        queue.pop_front();
        int src = index.at(subset);
        std::map<int, std::set<int>> post;
        for (int s : subset)
            for (const auto& [sym, targets] : a.delta[s]) {
                if (!kept[sym]) continue;
                post[sym].insert(targets.begin(), targets.end());
            }
        for (auto& [sym, tgt] : post) out.add_edge(src, remap[sym], get(closure(tgt)));
    }
    out.deterministic = true;
    return out;
}

Fsa complete(const Fsa& a, const std::string& sink_label) {
    Fsa out = a;
    int sink = -1;
    auto ensure_sink = [&]() {
        if (sink < 0) sink = out.add_state(sink_label, false);
        return sink;
    };
    int n = out.num_states();
    for (int s = 0; s < n; ++s)
        for (int sym = 0; sym < out.syms.size(); ++sym)
            if (!out.successors(s, sym)) out.add_edge(s, sym, ensure_sink());
    if (sink >= 0)
        for (int sym = 0; sym < out.syms.size(); ++sym) out.add_edge(sink, sym, sink);
    return out;
}

Fsa complement_marked(const Fsa& a) {
    if (!a.deterministic)
        throw std::invalid_argument("complement_marked requires a deterministic automaton");
    Fsa out = complete(a);
    for (int s = 0; s < out.num_states(); ++s) out.marked[s] = !out.marked[s];
    return out;
}

Fsa difference(const Fsa& a, const Fsa& b) {
    if (!(a.base == b.base) || !(a.syms == b.syms))
        throw std::invalid_argument("difference: alphabet mismatch");
    return meet(a, complement_marked(determinize(b)));
}

Fsa prefix_close(const Fsa& a) {
    std::vector<char> keep = a.coreachable_mask();
    std::vector<char> reach = a.reachable_mask();
    for (int s = 0; s < a.num_states(); ++s) keep[s] = keep[s] && reach[s];
    if (!keep[a.initial]) {
        // L_m(a) empty: closure is the empty language; keep a bare initial.
        Fsa out;
        out.base = a.base;
        out.syms = a.syms;
        out.add_state(a.states[a.initial], false);
        return out;
    }
    Fsa out = a.restrict(keep);
    std::fill(out.marked.begin(), out.marked.end(), 1);
    return out;
}

Fsa trim(const Fsa& a) {
    std::vector<char> keep = a.coreachable_mask();
    std::vector<char> reach = a.reachable_mask();
    bool initial_kept = keep[a.initial];
    for (int s = 0; s < a.num_states(); ++s) keep[s] = keep[s] && reach[s];
    if (!initial_kept) {
        Fsa out;
        out.base = a.base;
        out.syms = a.syms;
        out.add_state(a.states[a.initial], a.marked[a.initial] != 0);
        out.marked[0] = a.marked[a.initial];
        return out;
    }
    return a.restrict(keep);
}

bool is_coreachable(const Fsa& a) {
    std::vector<char> reach = a.reachable_mask();
    std::vector<char> core = a.coreachable_mask();
    for (int s = 0; s < a.num_states(); ++s)
        if (reach[s] && !core[s]) return false;
    return true;
}

Fsa universal(const BaseAlphabet& base, const SymbolTable& syms) {
    Fsa out;
    out.base = base;
    out.syms = syms;
    int s = out.add_state("u", true);
    out.initial = s;
    for (int sym = 0; sym < syms.size(); ++sym) out.add_edge(s, sym, s);
    return out;
}

Fsa recognizer(const BaseAlphabet& base, const SymbolTable& syms,
               const std::vector<std::vector<int>>& words) {
    Fsa out;
    out.base = base;
    out.syms = syms;
    out.initial = out.add_state("0");
    for (const auto& w : words) {
        int cur = out.initial;
        for (int sym : w) {
            int nxt = out.step(cur, sym);
            if (nxt < 0) {
                nxt = out.add_state(std::to_string(out.num_states()));
                out.add_edge(cur, sym, nxt);
            }
            cur = nxt;
        }
        out.marked[cur] = 1;
    }
    return out;
}

bool member(const Fsa& a, const std::vector<int>& word) {
    std::set<int> cur{a.initial};
    for (int sym : word) {
        std::set<int> nxt;
        for (int s : cur) {
            const auto* t = a.successors(s, sym);
            if (t) nxt.insert(t->begin(), t->end());
        }
        if (nxt.empty()) return false;
        cur.swap(nxt);
    }
    return true;
}

bool member_marked(const Fsa& a, const std::vector<int>& word) {
    std::set<int> cur{a.initial};
    for (int sym : word) {
        std::set<int> nxt;
        for (int s : cur) {
            const auto* t = a.successors(s, sym);
            if (t) nxt.insert(t->begin(), t->end());
        }
        if (nxt.empty()) return false;
        cur.swap(nxt);
    }
    return intersects_marked(a, cur);
}

bool empty_marked(const Fsa& a) {
    std::vector<char> reach = a.reachable_mask();
    for (int s = 0; s < a.num_states(); ++s)
        if (reach[s] && a.marked[s]) return false;
    return true;
}

bool includes(const Fsa& sup, const Fsa& sub, bool sup_marked, bool sub_marked) {
    if (!(sup.base == sub.base) || !(sup.syms == sub.syms))
        throw std::invalid_argument("inclusion: alphabet mismatch");
    // sub-language subseteq sup-language iff sub meet complement(sup) is empty.
    Fsa s = sub;
    if (!sub_marked) std::fill(s.marked.begin(), s.marked.end(), 1);
    Fsa p = determinize(sup);
    if (!sup_marked) std::fill(p.marked.begin(), p.marked.end(), 1);
    Fsa witness = meet(s, complement_marked(p));
    return empty_marked(witness);
}

bool includes_closed(const Fsa& sup, const Fsa& sub) {
    return includes(sup, sub, false, false);
}

bool language_equal(const Fsa& a, const Fsa& b) {
    return includes_closed(a, b) && includes_closed(b, a);
}

std::vector<std::vector<int>> enumerate_language(const Fsa& a, int maxlen, bool marked_only) {
    std::vector<std::vector<int>> out;
    // Shortlex BFS over subset configurations.
    struct Node {
        std::vector<int> word;
        std::set<int> states;
    };
    std::deque<Node> queue;
    queue.push_back({{}, {a.initial}});
    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        if (!marked_only || intersects_marked(a, node.states)) out.push_back(node.word);
        if (static_cast<int>(node.word.size()) == maxlen) continue;
        for (int sym = 0; sym < a.syms.size(); ++sym) {
            std::set<int> nxt;
            for (int s : node.states) {
                const auto* t = a.successors(s, sym);
                if (t) nxt.insert(t->begin(), t->end());
            }
            if (nxt.empty()) continue;
            Node child;
            child.word = node.word;
            child.word.push_back(sym);
            child.states = std::move(nxt);
            queue.push_back(std::move(child));
        }
    }
    return out;
}

} // namespace sentinel
