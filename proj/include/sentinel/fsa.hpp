// fsa.hpp -- finite-state automata over interned symbols
#ifndef SENTINEL_FSA_HPP
#define SENTINEL_FSA_HPP

#include <map>
#include <string>
#include <vector>

#include "sentinel/alphabet.hpp"
#include "sentinel/symbols.hpp"

namespace sentinel {

/// A finite-state automaton, deterministic or not, over a symbol table.
/// Transitions are partial; absence of a successor means the string dies.
struct Fsa {
    BaseAlphabet base;
    SymbolTable syms;
    std::vector<std::string> states;
    int initial = 0;
    std::vector<char> marked;
    std::vector<std::map<int, std::vector<int>>> delta;
    bool deterministic = true;

    int num_states() const { return static_cast<int>(states.size()); }
    int add_state(const std::string& label, bool is_marked = false);
    void add_edge(int src, int sym, int dst);
    bool has_edge(int src, int sym, int dst) const;
    const std::vector<int>* successors(int src, int sym) const;
    /// Unique successor for deterministic automata, -1 when undefined.
    int step(int src, int sym) const;
    /// Runs a symbol string from `from` (deterministic only), -1 when it dies.
    int run(int from, const std::vector<int>& word) const;

    void check_well_formed() const;

    std::vector<char> reachable_mask() const;
    std::vector<char> coreachable_mask() const;
    /// Restriction to states with keep[s] != 0 (initial must be kept).
    Fsa restrict(const std::vector<char>& keep) const;
};

} // namespace sentinel

#endif
