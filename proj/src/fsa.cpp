#include "sentinel/fsa.hpp"

#include <algorithm>
#include <deque>

namespace sentinel {

int Fsa::add_state(const std::string& label, bool is_marked) {
    states.push_back(label);
    marked.push_back(is_marked ? 1 : 0);
    delta.emplace_back();
    return num_states() - 1;
}

void Fsa::add_edge(int src, int sym, int dst) {
    auto& targets = delta.at(src)[sym];
    auto it = std::lower_bound(targets.begin(), targets.end(), dst);
    if (it != targets.end() && *it == dst) return;
    targets.insert(it, dst);
    if (targets.size() > 1) deterministic = false;
}

bool Fsa::has_edge(int src, int sym, int dst) const {
    const auto* t = successors(src, sym);
    return t && std::binary_search(t->begin(), t->end(), dst);
}

const std::vector<int>* Fsa::successors(int src, int sym) const {
    auto it = delta.at(src).find(sym);
    return it == delta.at(src).end() ? nullptr : &it->second;
}

int Fsa::step(int src, int sym) const {
    const auto* t = successors(src, sym);
    if (!t) return -1;
    if (t->size() != 1) throw std::logic_error("step() on a nondeterministic transition");
    return (*t)[0];
}

int Fsa::run(int from, const std::vector<int>& word) const {
    int s = from;
    for (int sym : word) {
        s = step(s, sym);
        if (s < 0) return -1;
    }
    return s;
}

void Fsa::check_well_formed() const {
    if (states.empty()) throw std::invalid_argument("automaton has no states");
    if (initial < 0 || initial >= num_states())
        throw std::invalid_argument("initial state out of range");
    if (marked.size() != states.size() || delta.size() != states.size())
        throw std::invalid_argument("inconsistent state arrays");
    for (int s = 0; s < num_states(); ++s)
        for (const auto& [sym, targets] : delta[s]) {
            if (sym < 0 || sym >= syms.size())
                throw std::invalid_argument("transition uses an undeclared symbol");
            for (int t : targets)
                if (t < 0 || t >= num_states())
                    throw std::invalid_argument("transition endpoint out of range");
            if (deterministic && targets.size() > 1)
                throw std::invalid_argument("deterministic flag set on a nondeterministic automaton");
        }
}

std::vector<char> Fsa::reachable_mask() const {
    std::vector<char> seen(num_states(), 0);
    std::deque<int> queue{initial};
    seen[initial] = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& [sym, targets] : delta[s])
            for (int t : targets)
                if (!seen[t]) {
                    seen[t] = 1;
                    queue.push_back(t);
                }
    }
    return seen;
}

std::vector<char> Fsa::coreachable_mask() const {
    std::vector<std::vector<int>> rev(num_states());
    for (int s = 0; s < num_states(); ++s)
        for (const auto& [sym, targets] : delta[s])
            for (int t : targets) rev[t].push_back(s);
    std::vector<char> seen(num_states(), 0);
    std::deque<int> queue;
    for (int s = 0; s < num_states(); ++s)
        if (marked[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int p : rev[s])
            if (!seen[p]) {
                seen[p] = 1;
                queue.push_back(p);
            }
    }
    return seen;
}

Fsa Fsa::restrict(const std::vector<char>& keep) const {
    if (!keep.at(initial))
        throw std::invalid_argument("restriction drops the initial state");
    Fsa out;
    out.base = base;
    out.syms = syms;
    out.deterministic = true;
    std::vector<int> remap(num_states(), -1);
    for (int s = 0; s < num_states(); ++s)
        if (keep[s]) remap[s] = out.add_state(states[s], marked[s]);
    out.initial = remap[initial];
    for (int s = 0; s < num_states(); ++s) {
        if (!keep[s]) continue;
        for (const auto& [sym, targets] : delta[s])
            for (int t : targets)
                if (keep[t]) out.add_edge(remap[s], sym, remap[t]);
    }
    return out;
}

} // namespace sentinel
