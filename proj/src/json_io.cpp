#include "sentinel/json_io.hpp"
#include <algorithm>

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sentinel {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

const char* kind_name(SymbolKind k) {
    switch (k) {
        case SymbolKind::Base: return "base";
        case SymbolKind::Aug: return "aug";
        case SymbolKind::SigmaN: return "sigma_n";
        case SymbolKind::FanoutGamma: return "fanout_gamma";
        case SymbolKind::GammaOnly: return "gamma";
    }
    return "base";
}

SymbolKind kind_from_name(const std::string& name) {
    if (name == "base") return SymbolKind::Base;
    if (name == "aug") return SymbolKind::Aug;
    if (name == "sigma_n") return SymbolKind::SigmaN;
    if (name == "fanout_gamma") return SymbolKind::FanoutGamma;
    if (name == "gamma") return SymbolKind::GammaOnly;
    throw std::invalid_argument("unknown symbol_kind '" + name + "'");
}

json pattern_to_json(const BaseAlphabet& base, Pattern p) {
    json out = json::array();
    for (int i = 0; i < base.size(); ++i)
        if (pattern_has(p, i)) out.push_back(base.at(i).name);
    return out;
}

Pattern pattern_from_json(const BaseAlphabet& base, const json& j) {
    Pattern p = 0;
    for (const auto& name : j) p |= Pattern{1} << base.require(name.get<std::string>());
    return p;
}

} // namespace

std::string fsa_to_json(const Fsa& a) {
    ordered_json out;
    out["alphabet"] = ordered_json::array();
    for (const Event& e : a.base.events()) {
        ordered_json ev;
        ev["name"] = e.name;
        ev["controllable"] = e.controllable;
        ev["observable"] = e.observable;
        ev["protected"] = e.shielded;
        out["alphabet"].push_back(ev);
    }
    if (a.syms.kind() != SymbolKind::Base)
        out["symbol_kind"] = kind_name(a.syms.kind());
    out["states"] = a.states;
    out["initial"] = a.states.at(a.initial);
    out["marked"] = ordered_json::array();
    for (int s = 0; s < a.num_states(); ++s)
        if (a.marked[s]) out["marked"].push_back(a.states[s]);
    out["transitions"] = ordered_json::array();
    // Canonical edge order: source declaration order, then symbol display,
    // then target. Stable across parse/serialize cycles.
    for (int s = 0; s < a.num_states(); ++s) {
        std::vector<std::pair<std::string, int>> edges;
        for (const auto& [sym, targets] : a.delta[s])
            for (int t : targets) edges.emplace_back(a.syms.display(sym), t);
        std::sort(edges.begin(), edges.end());
        for (const auto& [label, t] : edges)
            out["transitions"].push_back(ordered_json::array({a.states[s], label, a.states[t]}));
    }
    return out.dump(2) + "\n";
}

Fsa fsa_from_json(const std::string& text) {
    json j = json::parse(text);
    std::vector<Event> events;
    for (const auto& ev : j.at("alphabet")) {
        Event e;
        e.name = ev.at("name").get<std::string>();
        e.controllable = ev.value("controllable", false);
        e.observable = ev.value("observable", true);
        e.shielded = ev.value("protected", false);
        events.push_back(e);
    }
    Fsa a;
    a.base = BaseAlphabet(std::move(events));
    SymbolKind kind = kind_from_name(j.value("symbol_kind", std::string("base")));
    a.syms = kind == SymbolKind::Base ? SymbolTable::base(a.base) : SymbolTable(kind);

    std::map<std::string, int> state_of;
    for (const auto& s : j.at("states")) {
        std::string label = s.get<std::string>();
        if (state_of.count(label)) throw std::invalid_argument("duplicate state '" + label + "'");
        state_of[label] = a.add_state(label);
    }
    if (a.states.empty()) throw std::invalid_argument("automaton needs at least one state");
    auto sid = [&](const std::string& label) {
        auto it = state_of.find(label);
        if (it == state_of.end()) throw std::invalid_argument("undeclared state '" + label + "'");
        return it->second;
    };
    a.initial = sid(j.at("initial").get<std::string>());
    for (const auto& m : j.value("marked", json::array()))
        a.marked[sid(m.get<std::string>())] = 1;
    for (const auto& t : j.value("transitions", json::array())) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("transition must be [src, symbol, dst]");
        Symbol sym = a.syms.parse(a.base, t[1].get<std::string>());
        int id = a.syms.intern(a.base, sym);
        a.add_edge(sid(t[0].get<std::string>()), id, sid(t[2].get<std::string>()));
    }
    a.check_well_formed();
    return a;
}

std::string supervisor_map_to_json(const BaseAlphabet& base, const SupervisorMap& v) {
    ordered_json out;
    out["default"] = pattern_to_json(base, v.fallback);
    out["entries"] = ordered_json::object();
    for (const auto& [obs, pat] : v.entries)
        out["entries"][event_string_display(base, obs)] = pattern_to_json(base, pat);
    return out.dump(2) + "\n";
}

SupervisorMap supervisor_map_from_json(const BaseAlphabet& base, const std::string& text) {
    json j = json::parse(text);
    SupervisorMap v;
    if (j.count("default"))
        v.fallback = pattern_from_json(base, j.at("default"));
    else
        v.fallback = uncontrollable_mask(base);
    for (auto it = j.at("entries").begin(); it != j.at("entries").end(); ++it) {
        ObsWord obs = parse_event_string(base, it.key());
        v.entries[obs] = pattern_from_json(base, it.value());
    }
    return v;
}

std::string transducer_to_json(const BaseAlphabet& base, const AttackTransducer& a) {
    ordered_json out;
    out["states"] = a.states;
    out["initial"] = a.states.at(a.initial);
    out["transitions"] = ordered_json::array();
    for (const auto& e : a.edges)
        out["transitions"].push_back(ordered_json::array(
            {a.states[e.src], e.input < 0 ? "eps" : base.at(e.input).name,
             event_string_display(base, e.output), a.states[e.dst]}));
    return out.dump(2) + "\n";
}

AttackTransducer transducer_from_json(const BaseAlphabet& base, const std::string& text) {
    json j = json::parse(text);
    AttackTransducer a;
    std::map<std::string, int> state_of;
    for (const auto& s : j.at("states")) {
        std::string label = s.get<std::string>();
        state_of[label] = static_cast<int>(a.states.size());
        a.states.push_back(label);
    }
    auto sid = [&](const std::string& label) {
        auto it = state_of.find(label);
        if (it == state_of.end())
            throw std::invalid_argument("undeclared transducer state '" + label + "'");
        return it->second;
    };
    a.initial = sid(j.at("initial").get<std::string>());
    for (const auto& t : j.value("transitions", json::array())) {
        if (!t.is_array() || t.size() != 4)
            throw std::invalid_argument("transducer transition must be [src, in, out, dst]");
        AttackTransducer::Edge e;
        e.src = sid(t[0].get<std::string>());
        std::string in = t[1].get<std::string>();
        e.input = in == "eps" ? -1 : base.require(in);
        std::string outstr = t[2].get<std::string>();
        e.output = outstr.empty() ? ObsWord{} : parse_event_string(base, outstr);
        e.dst = sid(t[3].get<std::string>());
        a.edges.push_back(e);
    }
    return a;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

} // namespace sentinel
