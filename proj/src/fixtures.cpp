#include "sentinel/fixtures.hpp"

namespace sentinel::fixtures {

namespace {

Fsa make_plant(const BaseAlphabet& base, int states, int initial,
               const std::vector<int>& marked,
               const std::vector<std::tuple<int, const char*, int>>& edges) {
    Fsa g;
    g.base = base;
    g.syms = SymbolTable::base(base);
    for (int i = 0; i < states; ++i) g.add_state(std::to_string(i));
    g.initial = initial;
    for (int m : marked) g.marked[m] = 1;
    for (const auto& [src, name, dst] : edges) g.add_edge(src, base.require(name), dst);
    return g;
}

Fsa word_recognizer(const Fsa& plant, const std::vector<std::string>& words) {
    std::vector<std::vector<int>> ids;
    for (const auto& w : words) ids.push_back(parse_event_string(plant.base, w));
    return recognizer(plant.base, plant.syms, ids);
}

Pattern pat(const BaseAlphabet& base, const std::vector<const char*>& names) {
    Pattern p = 0;
    for (const char* n : names) p |= Pattern{1} << base.require(n);
    return p;
}

} // namespace

Example1 example1() {
    BaseAlphabet base({{"a", true, true, false},
                       {"b", true, true, false},
                       {"c", true, true, false},
                       {"d", true, true, false},
                       {"e", true, true, false}});
    Example1 ex;
    ex.plant = make_plant(base, 7, 0, {1, 6},
                          {{0, "a", 1},
                           {1, "b", 2},
                           {2, "c", 3},
                           {0, "d", 4},
                           {4, "e", 5},
                           {5, "c", 6}});
    ex.damage = word_recognizer(ex.plant, {"abc"});
    ex.supervisor.fallback = 0; // Sigma_uc is empty here
    ex.supervisor.entries[parse_event_string(base, "")] = pat(base, {"a", "d"});
    ex.supervisor.entries[parse_event_string(base, "d")] = pat(base, {"b", "e"});
    ex.supervisor.entries[parse_event_string(base, "de")] = pat(base, {"c"});
    return ex;
}

Example2 example2() {
    BaseAlphabet base({{"a", true, true, false},
                       {"b", true, true, false},
                       {"c", false, true, true},
                       {"d", true, true, true},
                       {"v", false, false, false}});
    Example2 ex;
    // 0 -a-> 1 -d-> 4 is the damaging route; 1 -v-> 3 -c-> 5 marks avc;
    // 2 -v-> 6 -d-> 7 marks bvd; 0 -d-> 8 is a dead decoy branch.
    ex.plant = make_plant(base, 9, 0, {5, 7},
                          {{0, "a", 1},
                           {0, "b", 2},
                           {0, "d", 8},
                           {1, "v", 3},
                           {1, "d", 4},
                           {3, "c", 5},
                           {2, "v", 6},
                           {6, "d", 7}});
    ex.damage = word_recognizer(ex.plant, {"ad"});
    ex.resilient.fallback = pat(base, {"v", "c"}); // Sigma_uc
    ex.resilient.entries[parse_event_string(base, "")] = pat(base, {"a", "v", "c"});
    ex.resilient.entries[parse_event_string(base, "a")] = pat(base, {"v", "c"});
    ex.resilient.entries[parse_event_string(base, "ac")] = pat(base, {"v", "c"});
    return ex;
}

Example3 example3() {
    BaseAlphabet base({{"a", true, true, false},
                       {"b", false, true, false},
                       {"v", false, false, false},
                       {"c", false, true, false}});
    Example3 ex;
    // Nondeterministic augmented branching arises at state 1: a direct c-step
    // to 3 and an unobservable detour v to 4 with c to 5. The a-cycles from
    // 3 and 2 keep the search's pattern choices aligned with the worked
    // supervisor.
    ex.plant = make_plant(base, 8, 0, {3, 5, 7},
                          {{0, "a", 1},
                           {0, "b", 2},
                           {1, "c", 3},
                           {1, "v", 4},
                           {4, "c", 5},
                           {2, "v", 6},
                           {6, "c", 7},
                           {2, "a", 1},
                           {3, "a", 1}});
    ex.damage = word_recognizer(ex.plant, {}); // empty damage language
    ex.extracted.fallback = pat(base, {"b", "v", "c"});
    ex.extracted.entries[parse_event_string(base, "")] = pat(base, {"a", "b", "v", "c"});
    ex.extracted.entries[parse_event_string(base, "a")] = pat(base, {"b", "v", "c"});
    ex.extracted.entries[parse_event_string(base, "b")] = pat(base, {"a", "b", "v", "c"});
    ex.extracted.entries[parse_event_string(base, "ac")] = pat(base, {"a", "b", "v", "c"});
    ex.extracted.entries[parse_event_string(base, "bc")] = pat(base, {"b", "v", "c"});
    return ex;
}

} // namespace sentinel::fixtures
