#include "sentinel/dot.hpp"

#include <sstream>

namespace sentinel {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string fsa_to_dot(const Fsa& a, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  __init [shape=point];\n";
    for (int s = 0; s < a.num_states(); ++s)
        out << "  n" << s << " [label=\"" << escape(a.states[s]) << "\", shape="
            << (a.marked[s] ? "doublecircle" : "circle") << "];\n";
    out << "  __init -> n" << a.initial << ";\n";
    for (int s = 0; s < a.num_states(); ++s)
        for (const auto& [sym, targets] : a.delta[s])
            for (int t : targets)
                out << "  n" << s << " -> n" << t << " [label=\"" << escape(a.syms.display(sym))
                    << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string transducer_to_dot(const BaseAlphabet& base, const AttackTransducer& t,
                              const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  __init [shape=point];\n";
    for (int s = 0; s < t.num_states(); ++s)
        out << "  n" << s << " [label=\"" << escape(t.states[s]) << "\", shape=doublecircle];\n";
    out << "  __init -> n" << t.initial << ";\n";
    for (const auto& e : t.edges) {
        std::string in = e.input < 0 ? "eps" : base.at(e.input).name;
        std::string output = e.output.empty() ? "eps" : event_string_display(base, e.output);
        out << "  n" << e.src << " -> n" << e.dst << " [label=\"" << escape(in) << "/"
            << escape(output) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace sentinel
