// symbols.hpp -- structural symbols over a base alphabet, incl. tuple symbols
#ifndef SENTINEL_SYMBOLS_HPP
#define SENTINEL_SYMBOLS_HPP

#include <map>
#include <string>
#include <vector>

#include "sentinel/alphabet.hpp"

namespace sentinel {

enum class CompKind {
    Ev,      // a base event
    Eps,     // the empty-observation slot of Sigma_o^eps
    Obs,     // an observable string (Delta_n element of length != 1)
    Pat,     // a control pattern
};

struct SymComp {
    CompKind kind = CompKind::Eps;
    int ev = -1;              // Ev
    std::vector<int> seq;     // Obs: event ids in order
    Pattern pat = 0;          // Pat

    static SymComp event(int id) { SymComp c; c.kind = CompKind::Ev; c.ev = id; return c; }
    static SymComp eps() { return SymComp{}; }
    static SymComp obs(std::vector<int> s);
    static SymComp pattern(Pattern p) { SymComp c; c.kind = CompKind::Pat; c.pat = p; return c; }

    bool operator==(const SymComp& o) const;
    bool operator<(const SymComp& o) const;
};

/// A symbol: one component (base alphabets) or a tuple of components.
struct Symbol {
    std::vector<SymComp> comps;

    static Symbol event(int id) { return Symbol{{SymComp::event(id)}}; }
    static Symbol tuple(std::vector<SymComp> cs) { return Symbol{std::move(cs)}; }

    bool operator==(const Symbol& o) const { return comps == o.comps; }
    bool operator<(const Symbol& o) const { return comps < o.comps; }
};

/// Shapes a symbol table can take; determines parsing and display.
enum class SymbolKind {
    Base,          // Sigma
    Aug,           // Sigma_o^eps x Gamma
    SigmaN,        // Sigma x Sigma_o^eps x Delta_n
    FanoutGamma,   // (Sigma u Delta_n) x Gamma
    GammaOnly,     // Gamma
};

/// Interned symbols with canonical display strings.
class SymbolTable {
public:
    SymbolTable() = default;
    explicit SymbolTable(SymbolKind kind) : kind_(kind) {}

    SymbolKind kind() const { return kind_; }
    int size() const { return static_cast<int>(symbols_.size()); }
    const Symbol& at(int id) const { return symbols_.at(id); }

    /// Interns a symbol, returning its id (appends when new).
    int intern(const BaseAlphabet& base, const Symbol& s);
    /// Id of a symbol, -1 if absent.
    int find(const Symbol& s) const;
    int find_display(const std::string& d) const;

    const std::string& display(int id) const { return displays_.at(id); }
    /// Parses a canonical display string against this table's shape.
    Symbol parse(const BaseAlphabet& base, const std::string& text) const;

    bool operator==(const SymbolTable& o) const;

    /// A base table listing every event of `a` in order.
    static SymbolTable base(const BaseAlphabet& a);

private:
    SymbolKind kind_ = SymbolKind::Base;
    std::vector<Symbol> symbols_;
    std::vector<std::string> displays_;
    std::map<Symbol, int> index_;
    std::map<std::string, int> display_index_;
};

std::string comp_display(const BaseAlphabet& base, const SymComp& c);
std::string symbol_display(const BaseAlphabet& base, const Symbol& s);

/// Greedy longest-match segmentation of a concatenated-event-name string.
std::vector<int> parse_event_string(const BaseAlphabet& base, const std::string& text);
std::string event_string_display(const BaseAlphabet& base, const std::vector<int>& seq);

} // namespace sentinel

#endif
