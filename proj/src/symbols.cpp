#include "sentinel/symbols.hpp"

#include <algorithm>
#include <tuple>

namespace sentinel {

SymComp SymComp::obs(std::vector<int> s) {
    // Canonical form: empty -> Eps, single letter -> Ev.
    if (s.empty()) return eps();
    if (s.size() == 1) return event(s[0]);
    SymComp c;
    c.kind = CompKind::Obs;
    c.seq = std::move(s);
    return c;
}

bool SymComp::operator==(const SymComp& o) const {
    return kind == o.kind && ev == o.ev && seq == o.seq && pat == o.pat;
}

bool SymComp::operator<(const SymComp& o) const {
    // Eps < Ev < Obs < Pat, then by value. Keeps eps first within Sigma_o^eps
    // slots so canonical tuple enumeration is stable.
    auto rank = [](CompKind k) {
        switch (k) {
            case CompKind::Eps: return 0;
            case CompKind::Ev: return 1;
            case CompKind::Obs: return 2;
            case CompKind::Pat: return 3;
        }
        return 4;
    };
    int ra = rank(kind), rb = rank(o.kind);
    return std::tie(ra, ev, seq, pat) < std::tie(rb, o.ev, o.seq, o.pat);
}

std::string event_string_display(const BaseAlphabet& base, const std::vector<int>& seq) {
    std::string out;
    for (int id : seq) out += base.at(id).name;
    return out;
}

std::vector<int> parse_event_string(const BaseAlphabet& base, const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        int best = -1;
        std::size_t best_len = 0;
        for (int i = 0; i < base.size(); ++i) {
            const std::string& n = base.at(i).name;
            if (n.size() > best_len && text.compare(pos, n.size(), n) == 0) {
                best = i;
                best_len = n.size();
            }
        }
        if (best < 0)
            throw std::invalid_argument("cannot segment '" + text + "' into event names at offset " +
                                        std::to_string(pos));
        out.push_back(best);
        pos += best_len;
    }
    return out;
}

std::string comp_display(const BaseAlphabet& base, const SymComp& c) {
    switch (c.kind) {
        case CompKind::Eps: return "eps";
        case CompKind::Ev: return base.at(c.ev).name;
        case CompKind::Obs: return event_string_display(base, c.seq);
        case CompKind::Pat: return "g:" + pattern_display(base, c.pat);
    }
    throw std::logic_error("bad component kind");
}

std::string symbol_display(const BaseAlphabet& base, const Symbol& s) {
    if (s.comps.size() == 1 && s.comps[0].kind == CompKind::Ev)
        return base.at(s.comps[0].ev).name;
    if (s.comps.size() == 1) return comp_display(base, s.comps[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < s.comps.size(); ++i) {
        if (i) out += "|";
        out += comp_display(base, s.comps[i]);
    }
    out += ")";
    return out;
}

int SymbolTable::intern(const BaseAlphabet& base, const Symbol& s) {
    auto it = index_.find(s);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(symbols_.size());
    symbols_.push_back(s);
    displays_.push_back(symbol_display(base, s));
    index_.emplace(s, id);
    display_index_.emplace(displays_.back(), id);
    return id;
}

int SymbolTable::find(const Symbol& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
}

int SymbolTable::find_display(const std::string& d) const {
    auto it = display_index_.find(d);
    return it == display_index_.end() ? -1 : it->second;
}

bool SymbolTable::operator==(const SymbolTable& o) const {
    return kind_ == o.kind_ && symbols_ == o.symbols_;
}

SymbolTable SymbolTable::base(const BaseAlphabet& a) {
    SymbolTable t(SymbolKind::Base);
    for (int i = 0; i < a.size(); ++i) t.intern(a, Symbol::event(i));
    return t;
}

namespace {

std::vector<std::string> split_top_level(const std::string& text) {
    // Splits "a|g:{x,y}|de" on '|' outside braces/parens.
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '{' || ch == '(') ++depth;
        if (ch == '}' || ch == ')') --depth;
        if (ch == '|' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

Pattern parse_pattern_text(const BaseAlphabet& base, const std::string& text) {
    // "g:{a,v,c}" or "{a,v,c}"
    std::string body = text;
    if (body.rfind("g:", 0) == 0) body = body.substr(2);
    if (body.size() < 2 || body.front() != '{' || body.back() != '}')
        throw std::invalid_argument("malformed pattern '" + text + "'");
    body = body.substr(1, body.size() - 2);
    Pattern p = 0;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string name = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!name.empty()) p |= Pattern{1} << base.require(name);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return p;
}

SymComp parse_obs_slot(const BaseAlphabet& base, const std::string& text) {
    if (text == "eps" || text.empty()) return SymComp::eps();
    return SymComp::obs(parse_event_string(base, text));
}

SymComp parse_event_slot(const BaseAlphabet& base, const std::string& text) {
    if (text == "eps") return SymComp::eps();
    return SymComp::event(base.require(text));
}

} // namespace

Symbol SymbolTable::parse(const BaseAlphabet& base, const std::string& text) const {
    std::string body = text;
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
        body = body.substr(1, body.size() - 2);
    std::vector<std::string> parts = split_top_level(body);
    switch (kind_) {
        case SymbolKind::Base: {
            if (parts.size() != 1)
                throw std::invalid_argument("expected a bare event, got '" + text + "'");
            return Symbol::event(base.require(parts[0]));
        }
        case SymbolKind::Aug: {
            if (parts.size() != 2)
                throw std::invalid_argument("expected (obs|pattern), got '" + text + "'");
            return Symbol::tuple({parse_event_slot(base, parts[0]),
                                  SymComp::pattern(parse_pattern_text(base, parts[1]))});
        }
        case SymbolKind::SigmaN: {
            if (parts.size() != 3)
                throw std::invalid_argument("expected (event|obs|fake), got '" + text + "'");
            return Symbol::tuple({parse_event_slot(base, parts[0]),
                                  parse_event_slot(base, parts[1]),
                                  parse_obs_slot(base, parts[2])});
        }
        case SymbolKind::FanoutGamma: {
            if (parts.size() != 2)
                throw std::invalid_argument("expected (letter|pattern), got '" + text + "'");
            return Symbol::tuple({parse_obs_slot(base, parts[0]),
                                  SymComp::pattern(parse_pattern_text(base, parts[1]))});
        }
        case SymbolKind::GammaOnly: {
            if (parts.size() != 1)
                throw std::invalid_argument("expected a bare pattern, got '" + text + "'");
            return Symbol::tuple({SymComp::pattern(parse_pattern_text(base, parts[0]))});
        }
    }
    throw std::logic_error("bad symbol kind");
}

} // namespace sentinel
