// ops.hpp -- kernel language operations and decision queries
#ifndef SENTINEL_OPS_HPP
#define SENTINEL_OPS_HPP

#include <optional>
#include <string>
#include <vector>

#include "sentinel/fsa.hpp"

namespace sentinel {

/// Synchronous product. Requires identical alphabets. L and L_m intersect;
/// only reachable states are kept; labels are "(la,lb)" pairs.
Fsa meet(const Fsa& a, const Fsa& b);

/// Rabin-Scott subset construction. Same closed and marked language; a
/// subset is marked iff it contains a marked state.
Fsa determinize(const Fsa& n);

/// Recognizer of P(L(a)) and P(L_m(a)) for the projection that keeps the
/// symbols in `keep` (ids into a.syms) and erases the rest.
Fsa project(const Fsa& a, const std::vector<int>& keep);

/// Marked-language subtraction: L_m(result) = L_m(a) - L_m(b); the closed
/// language stays L(a).
Fsa difference(const Fsa& a, const Fsa& b);

/// Recognizer of the prefix closure of L_m(a): coreachable part, all marked.
Fsa prefix_close(const Fsa& a);

/// Drops non-reachable and non-coreachable states. Marked language unchanged.
Fsa trim(const Fsa& a);

bool is_coreachable(const Fsa& a);

/// Totalizes the transition function with an unmarked sink.
Fsa complete(const Fsa& a, const std::string& sink_label = "sink");

/// Flips marking of a deterministic automaton after completion:
/// L_m(result) = Sigma^* - L_m(a).
Fsa complement_marked(const Fsa& a);

/// Single marked state with self-loops on every symbol of the table.
Fsa universal(const BaseAlphabet& base, const SymbolTable& syms);

/// Trie recognizer of a finite set of symbol strings (marked language).
Fsa recognizer(const BaseAlphabet& base, const SymbolTable& syms,
               const std::vector<std::vector<int>>& words);

// --- queries ---------------------------------------------------------------

bool member(const Fsa& a, const std::vector<int>& word);
bool member_marked(const Fsa& a, const std::vector<int>& word);
/// L_m(a) == empty?
bool empty_marked(const Fsa& a);
/// Closed/marked language inclusion; `*_marked` pick which language on each side.
bool includes(const Fsa& sup, const Fsa& sub, bool sup_marked, bool sub_marked);
/// L(sub) subseteq L(sup) on closed languages.
bool includes_closed(const Fsa& sup, const Fsa& sub);
bool language_equal(const Fsa& a, const Fsa& b);

/// All strings of L(a) (or L_m(a)) with length <= maxlen, shortlex in the
/// symbol table's order.
std::vector<std::vector<int>> enumerate_language(const Fsa& a, int maxlen,
                                                 bool marked_only = false);

} // namespace sentinel

#endif
