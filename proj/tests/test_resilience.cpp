#include <doctest.h>

#include "oracles.hpp"
#include "sentinel/fixtures.hpp"
#include "sentinel/resilience.hpp"

using namespace sentinel;

namespace {

struct Ex2Pipeline {
    Fsa g, d;
    Gamma gamma;
    Fsa d_iota, d_psi, d_nu;
    GZeta gz;
    HAutomaton h, hsup;
    PHAutomaton ph;
};

Ex2Pipeline ex2_pipeline() {
    auto ex = fixtures::example2();
    Ex2Pipeline p{apply_protected(ex.plant, {"c", "d"}),
                  apply_protected(ex.damage, {"c", "d"}),
                  control_patterns(apply_protected(ex.plant, {"c", "d"}).base),
                  {}, {}, {}, {}, {}, {}, {}};
    RunConfig cfg;
    cfg.bound = 1;
    p.d_iota = build_D_iota(p.d, p.gamma, cfg);
    p.d_psi = build_D_psi(p.d_iota, 1, cfg);
    p.d_nu = build_D_nu(p.d_psi, p.gamma, cfg);
    p.gz = build_G_zeta(p.g, p.gamma, cfg);
    p.h = build_H(p.gz, p.d_nu, p.gamma, cfg);
    p.hsup = sup_conditionally_controllable(p.h, p.gz);
    p.ph = build_PH(p.hsup, cfg);
    return p;
}

std::set<std::string> marked_displays(const Fsa& a, int maxlen) {
    std::set<std::string> out;
    for (const auto& w : enumerate_language(a, maxlen, true)) {
        std::string s;
        for (int sym : w) s += a.syms.display(sym);
        out.insert(s);
    }
    return out;
}

std::set<std::string> closed_displays(const Fsa& a, int maxlen) {
    std::set<std::string> out;
    for (const auto& w : enumerate_language(a, maxlen)) {
        std::string s;
        for (int sym : w) s += a.syms.display(sym);
        out.insert(s);
    }
    return out;
}

} // namespace

TEST_CASE("D_iota matches the direct iota evaluator on example 2") {
    auto p = ex2_pipeline();
    // oracle: iota over damage strings to length 4
    std::set<std::string> expect;
    for (const auto& s : oracles::marked_strings(p.d, 4))
        for (const auto& w : oracles::iota_of(p.g.base, s))
            expect.insert(oracles::fan_display(p.g.base, w));
    CHECK(marked_displays(p.d_iota, 4) == expect);
    // iota(eps) = eps and L_dam = {ad}: every marked word has length 2 with
    // a in slot 1, d in slot 2: 4x4 pattern combinations of the 8-pattern Gamma.
    auto words = enumerate_language(p.d_iota, 4, true);
    CHECK(words.size() == 16);
    CHECK_FALSE(member_marked(p.d_iota, {}));
}

TEST_CASE("D_psi matches the direct psi evaluator and the protected rule") {
    auto p = ex2_pipeline();
    std::set<std::string> expect;
    for (const auto& s : oracles::marked_strings(p.d, 4))
        for (const auto& w : oracles::iota_of(p.g.base, s))
            for (const auto& w2 : oracles::psi_of(p.g.base, w, 1))
                expect.insert(oracles::fan_display(p.g.base, w2));
    CHECK(marked_displays(p.d_psi, 4) == expect);
    // the a-slot fans out to Delta_1 - {c,d} = {eps,a,b}; the d-slot stays d.
    for (const auto& w : enumerate_language(p.d_psi, 2, true)) {
        REQUIRE(w.size() == 2);
        const Symbol& first = p.d_psi.syms.at(w[0]);
        const Symbol& second = p.d_psi.syms.at(w[1]);
        CHECK((first.comps[0].kind == CompKind::Eps ||
               (first.comps[0].kind == CompKind::Ev &&
                (p.g.base.at(first.comps[0].ev).name == "a" ||
                 p.g.base.at(first.comps[0].ev).name == "b"))));
        REQUIRE(second.comps[0].kind == CompKind::Ev);
        CHECK(p.g.base.at(second.comps[0].ev).name == "d");
    }
}

TEST_CASE("psi keeps protected alphabets verbatim") {
    auto ex = fixtures::example2();
    Fsa g = apply_protected(ex.plant, {"a", "b", "c", "d"}); // every observable protected
    Fsa d = apply_protected(ex.damage, {"a", "b", "c", "d"});
    Gamma gamma = control_patterns(g.base);
    Fsa di = build_D_iota(d, gamma);
    Fsa dp = build_D_psi(di, 1);
    CHECK(marked_displays(dp, 4) == marked_displays(di, 4));
}

TEST_CASE("psi fan-out degree on a single attackable event") {
    BaseAlphabet base({{"a", true, true, false}});
    Fsa d;
    d.base = base;
    d.syms = SymbolTable::base(base);
    d.initial = d.add_state("0");
    int one = d.add_state("1", true);
    d.add_edge(0, 0, one);
    Gamma gamma = control_patterns(base);
    Fsa di = build_D_iota(d, gamma);
    Fsa dp = build_D_psi(di, 1);
    // fan-out degree per attackable edge = |Delta_1 - Sigma_op| = 2 (eps, a)
    int edges = 0;
    for (const auto& [sym, targets] : dp.delta[0]) edges += static_cast<int>(targets.size());
    CHECK(edges == 2);
}

TEST_CASE("D_nu equals D_psi-with-relabel when n=1 and matches the nu evaluator") {
    auto p = ex2_pipeline();
    std::set<std::string> expect;
    for (const auto& s : oracles::marked_strings(p.d, 4))
        for (const auto& w : oracles::iota_of(p.g.base, s))
            for (const auto& w2 : oracles::psi_of(p.g.base, w, 1))
                for (const auto& w3 : oracles::nu_of(p.g.base, w2))
                    expect.insert(oracles::aug_display(p.g.base, w3));
    CHECK(marked_displays(p.d_nu, 4) == expect);
}

TEST_CASE("nu expands multi-letter fakes through fresh states") {
    // one-edge automaton over {a,b} with a 2-letter fake
    BaseAlphabet base({{"a", true, true, false}, {"b", false, true, false}});
    Gamma gamma = control_patterns(base);
    Fsa dp;
    dp.base = base;
    dp.syms = SymbolTable(SymbolKind::FanoutGamma);
    dp.initial = dp.add_state("0");
    int one = dp.add_state("1", true);
    Pattern full = full_mask(base);
    int sym = dp.syms.intern(base, Symbol::tuple({SymComp::obs({0, 1}), SymComp::pattern(full)}));
    dp.add_edge(0, sym, one);
    Fsa dn = build_D_nu(dp, gamma);
    // r-1 = 1 fresh state
    CHECK(dn.num_states() == 3);
    // paths (a,gamma_1)(b,full) over all gamma_1 containing a
    std::set<std::string> expect;
    for (Pattern p1 : gamma.all()) {
        if (!pattern_has(p1, 0)) continue;
        expect.insert("(a|g:" + pattern_display(base, p1) + ")(b|g:" + pattern_display(base, full) +
                      ")");
    }
    CHECK(marked_displays(dn, 3) == expect);
}

TEST_CASE("G_zeta recognizes the zeta image (Prop 4) on examples 2 and 3") {
    auto p = ex2_pipeline();
    std::set<std::string> expect;
    for (const auto& w : oracles::zeta_language(p.g, 3))
        expect.insert(oracles::aug_display(p.g.base, w));
    std::set<std::string> got = closed_displays(p.gz.fsa, 3);
    got.erase(""); // the oracle set holds non-empty images only
    CHECK(got == expect);

    auto ex3 = fixtures::example3();
    Gamma gamma3 = control_patterns(ex3.plant.base);
    GZeta gz3 = build_G_zeta(ex3.plant, gamma3);
    std::set<std::string> expect3;
    for (const auto& w : oracles::zeta_language(ex3.plant, 4))
        expect3.insert(oracles::aug_display(ex3.plant.base, w));
    std::set<std::string> got3 = closed_displays(gz3.fsa, 4);
    got3.erase("");
    CHECK(got3 == expect3);
}

TEST_CASE("G_zeta: nondeterministic branching at (1,a,.) in example 3") {
    auto ex = fixtures::example3();
    Gamma gamma = control_patterns(ex.plant.base);
    GZeta gz = build_G_zeta(ex.plant, gamma);
    CHECK_FALSE(gz.fsa.deterministic);
    bool branching_at_1a = false;
    for (int s = 0; s < gz.fsa.num_states(); ++s) {
        if (gz.is_init[s] || gz.x_of[s] != 1) continue;
        if (gz.obs_of[s] != ex.plant.base.require("a")) continue;
        for (const auto& [sym, targets] : gz.fsa.delta[s])
            if (targets.size() > 1) branching_at_1a = true;
    }
    CHECK(branching_at_1a);
}

TEST_CASE("G_zeta: no eps self-loops when every event is observable") {
    auto ex = fixtures::example1(); // all events observable
    Gamma gamma = control_patterns(ex.plant.base);
    GZeta gz = build_G_zeta(ex.plant, gamma);
    for (int s = 0; s < gz.fsa.num_states(); ++s) {
        if (gz.is_init[s]) continue;
        for (const auto& [sym, targets] : gz.fsa.delta[s])
            CHECK(gz.fsa.syms.at(sym).comps[0].kind != CompKind::Eps);
    }
}

TEST_CASE("g-image invariant: g(w) = P_o(s) for zeta witnesses") {
    auto ex = fixtures::example3();
    Gamma gamma = control_patterns(ex.plant.base);
    GZeta gz = build_G_zeta(ex.plant, gamma);
    // every generated w in L(G_zeta): its g-image must be an observation of
    // some plant string (joint enumeration to length 4)
    std::set<ObsWord> obs_images;
    for (const auto& s : oracles::plant_strings(ex.plant, 8)) {
        ObsWord o;
        for (int sym : s) {
            int ev = ex.plant.syms.at(sym).comps.at(0).ev;
            if (ex.plant.base.observable(ev)) o.push_back(ev);
        }
        obs_images.insert(o);
    }
    for (const auto& w : enumerate_language(gz.fsa, 4)) {
        ObsWord o;
        for (int sym : w) {
            const SymComp& c = gz.fsa.syms.at(sym).comps[0];
            if (c.kind == CompKind::Ev) o.push_back(c.ev);
        }
        CHECK(obs_images.count(o));
    }
}

TEST_CASE("H removes exactly the risky-prefixed pattern sequences (example 2)") {
    auto p = ex2_pipeline();
    int a = p.g.base.require("a"), d = p.g.base.require("d");
    // no string of H carries a pattern sequence with a in slot 1, d in slot 2
    for (const auto& w : enumerate_language(p.h.fsa, 3)) {
        if (w.size() < 2) continue;
        Pattern p1 = p.h.fsa.syms.at(w[0]).comps.back().pat;
        Pattern p2 = p.h.fsa.syms.at(w[1]).comps.back().pat;
        CHECK_FALSE((pattern_has(p1, a) && pattern_has(p2, d)));
    }
    // and with an empty damage language H equals zeta(L(G))
    auto ex3 = fixtures::example3();
    Gamma gamma3 = control_patterns(ex3.plant.base);
    GZeta gz3 = build_G_zeta(ex3.plant, gamma3);
    Fsa di3 = build_D_iota(ex3.damage, gamma3);
    Fsa dp3 = build_D_psi(di3, 1);
    Fsa dn3 = build_D_nu(dp3, gamma3);
    HAutomaton h3 = build_H(gz3, dn3, gamma3);
    CHECK(language_equal(h3.fsa, gz3.fsa));
}

TEST_CASE("supremal conditionally controllable sublanguage") {
    auto ex3 = fixtures::example3();
    Gamma gamma3 = control_patterns(ex3.plant.base);
    GZeta gz3 = build_G_zeta(ex3.plant, gamma3);
    Fsa dn3 = build_D_nu(build_D_psi(build_D_iota(ex3.damage, gamma3), 1), gamma3);
    HAutomaton h3 = build_H(gz3, dn3, gamma3);
    HAutomaton s3 = sup_conditionally_controllable(h3, gz3);
    // h = g_zeta: fixpoint immediately
    CHECK(language_equal(s3.fsa, gz3.fsa));

    // S* is conditionally controllable state-wise on example 2
    auto p = ex2_pipeline();
    Pattern uo = 0;
    for (int i = 0; i < p.g.base.size(); ++i)
        if (!p.g.base.observable(i)) uo |= Pattern{1} << i;
    for (int q = 0; q < p.hsup.fsa.num_states(); ++q) {
        int gzs = p.hsup.gz_of[q];
        if (p.gz.is_init[gzs]) continue;
        Pattern pat = p.gz.pat_of[gzs];
        if (!(pat & uo)) continue;
        int sid = p.hsup.fsa.syms.find(Symbol::tuple({SymComp::eps(), SymComp::pattern(pat)}));
        const auto* t = p.hsup.fsa.successors(q, sid);
        CHECK((t && !t->empty()));
    }
    // the paper's candidate survives inside S*
    SupervisorFsa paper = supervisor_to_fsa(p.g.base, fixtures::example2().resilient);
    Fsa cand = induced_candidate(p.gz, paper);
    CHECK(includes_closed(p.hsup.fsa, cand));
}

TEST_CASE("estimate maps on example 3") {
    auto ex = fixtures::example3();
    Gamma gamma = control_patterns(ex.plant.base);
    GZeta gz = build_G_zeta(ex.plant, gamma);
    Fsa dn = build_D_nu(build_D_psi(build_D_iota(ex.damage, gamma), 1), gamma);
    HAutomaton h = build_H(gz, dn, gamma);
    HAutomaton hs = sup_conditionally_controllable(h, gz);
    EstimateMaps maps = estimate_maps(hs, ex.plant);

    Pattern g1 = full_mask(ex.plant.base);          // {a,b,v,c}
    Pattern g2 = uncontrollable_mask(ex.plant.base); // {b,v,c}
    auto sym = [&](int ev, Pattern p) {
        Symbol s = ev < 0 ? Symbol::tuple({SymComp::eps(), SymComp::pattern(p)})
                          : Symbol::tuple({SymComp::event(ev), SymComp::pattern(p)});
        int id = hs.fsa.syms.find(s);
        REQUIRE(id >= 0);
        return id;
    };
    int a = ex.plant.base.require("a");

    // f((eps,{a,b,v,c})): hand closure on the fixture: from 0 the pattern
    // allows a->1 and b->2 as the one trailing observable; no unobservables
    // at 0, so f = {0,1,2}.
    std::set<int> f0 = maps.f({sym(-1, g1)});
    CHECK(f0 == std::set<int>({0, 1, 2}));

    // f((eps,{a,b,v,c})(a,{b,v,c})): a-step from f0 lands in {1}, pattern
    // {b,v,c} closes over v to 4 and one observable c reaches {3,5}.
    std::set<int> f1 = maps.f({sym(-1, g1), sym(a, g2)});
    CHECK(f1 == std::set<int>({1, 3, 4, 5}));

    // h(s) = empty whenever f(s) misses X_m
    SUBCASE("h vanishes without marked estimates") {
        // (eps,{b,v,c}): from 0 only b->2 reachable; no marked state
        std::set<int> f2 = maps.f({sym(-1, g2)});
        CHECK(f2 == std::set<int>({0, 2}));
        CHECK(maps.h({sym(-1, g2)}).empty());
    }
    // f(eps,gamma) with gamma = Sigma_uc and no unobservables at x0:
    // {x0} plus one observable step allowed by the pattern.
    SUBCASE("initial estimate follows the pattern closure") {
        std::set<int> f3 = maps.f({sym(-1, g2)});
        CHECK(f3.count(0) == 1);
    }
}

TEST_CASE("P(H) info sets of example 3 match the worked display") {
    auto ex = fixtures::example3();
    Gamma gamma = control_patterns(ex.plant.base);
    GZeta gz = build_G_zeta(ex.plant, gamma);
    Fsa dn = build_D_nu(build_D_psi(build_D_iota(ex.damage, gamma), 1), gamma);
    HAutomaton hs = sup_conditionally_controllable(build_H(gz, dn, gamma), gz);
    PHAutomaton ph = build_PH(hs);
    CHECK(language_equal(ph.fsa, hs.fsa));

    Pattern g1 = full_mask(ex.plant.base);
    Pattern g2 = uncontrollable_mask(ex.plant.base);
    // expected info sets as (x, obs, pattern) triples; -2 marks the initial
    using Triple = std::tuple<int, int, Pattern>;
    auto class_triples = [&](const PHAutomaton::InfoClass& c) {
        std::set<Triple> out;
        for (int q : c.members) {
            int gzs = hs.gz_of[q];
            if (gz.is_init[gzs])
                out.insert({-2, -2, 0});
            else
                out.insert({gz.x_of[gzs], gz.obs_of[gzs], gz.pat_of[gzs]});
        }
        return out;
    };
    int a = ex.plant.base.require("a"), b = ex.plant.base.require("b"),
        c = ex.plant.base.require("c");
    std::set<std::set<Triple>> expect = {
        {{-2, -2, 0}, {0, -1, g1}, {0, -1, g2}},
        {{1, a, g1}, {1, a, g2}},
        {{2, b, g1}, {2, b, g2}},
        {{3, c, g1}, {3, c, g2}, {5, c, g1}, {5, c, g2}},
        {{7, c, g1}, {7, c, g2}},
    };
    std::set<std::set<Triple>> got;
    for (const auto& cls : ph.classes) got.insert(class_triples(cls));
    CHECK(got == expect);
    CHECK(ph.classes.size() == 5);
}

TEST_CASE("P(H) has singleton info components when everything is observable") {
    auto ex = fixtures::example1();
    Gamma gamma = control_patterns(ex.plant.base);
    GZeta gz = build_G_zeta(ex.plant, gamma);
    // The pattern component still varies inside a class; determinism claims
    // apply to the q-component per string. Check L(P(H)) = L(H).
    Fsa dn = build_D_nu(build_D_psi(build_D_iota(ex.damage, gamma), 1), gamma);
    HAutomaton hs = sup_conditionally_controllable(build_H(gz, dn, gamma), gz);
    PHAutomaton ph = build_PH(hs);
    for (const auto& w : enumerate_language(hs.fsa, 3)) CHECK(member(ph.fsa, w));
    for (const auto& w : enumerate_language(ph.fsa, 3)) CHECK(member(hs.fsa, w));
}

TEST_CASE("find_control_feasible reproduces the worked omega on example 3") {
    auto ex = fixtures::example3();
    Gamma gamma = control_patterns(ex.plant.base);
    GZeta gz = build_G_zeta(ex.plant, gamma);
    Fsa dn = build_D_nu(build_D_psi(build_D_iota(ex.damage, gamma), 1), gamma);
    HAutomaton hs = sup_conditionally_controllable(build_H(gz, dn, gamma), gz);
    PHAutomaton ph = build_PH(hs);
    auto omega = find_control_feasible(ph, hs, gz, gamma, ex.plant);
    REQUIRE(omega.has_value());
    Report rep = check_control_feasible(*omega, ph, hs, gz, gamma);
    CHECK(rep.ok);
    ExtractedSupervisor sup = extract_supervisor(*omega, ph, hs, gz, ex.plant.base);
    CHECK(sup.map.entries == ex.extracted.entries);
}

TEST_CASE("omega fails when the root class cannot avoid pruned regions") {
    // plant x0 -v-> xdam with damage {v}: every pattern contains v, so every
    // initial pattern is risky and no control feasible sub-automaton exists.
    BaseAlphabet base({{"a", true, true, false}, {"v", false, false, false}});
    Fsa g;
    g.base = base;
    g.syms = SymbolTable::base(base);
    g.initial = g.add_state("0", true);
    int dam = g.add_state("xdam");
    g.add_edge(0, base.require("v"), dam);
    Fsa d = recognizer(base, g.syms, {{base.require("v")}});
    Decision dec = decide_resilient(g, d, 1, {});
    CHECK_FALSE(dec.exists);
}

TEST_CASE("the paper's example-2 candidate passes and a cond-2 violator fails") {
    auto p = ex2_pipeline();
    auto ex = fixtures::example2();
    SupervisorFsa paper = supervisor_to_fsa(p.g.base, ex.resilient);
    Fsa cand = induced_candidate(p.gz, paper);
    Report rep = check_candidate_language(cand, p.hsup, p.g, p.gz, 6);
    CHECK(rep.ok);

    // Fig. 7's removed state (0,eps,{a,b,v,c}): its induced candidate keeps
    // pattern {a,b,v,c} initially, whose b-branch is crippled by the risky
    // pruning; condition 2 must flag it.
    SupervisorMap bad;
    bad.fallback = uncontrollable_mask(p.g.base);
    Pattern g_abvc = 0;
    for (const char* nm : {"a", "b", "v", "c"}) g_abvc |= Pattern{1} << p.g.base.require(nm);
    bad.entries[{}] = g_abvc;
    SupervisorFsa bad_fsa = supervisor_to_fsa(p.g.base, bad);
    Fsa bad_cand = induced_candidate(p.gz, bad_fsa);
    Report rep2 = check_candidate_language(bad_cand, p.hsup, p.g, p.gz, 6);
    CHECK_FALSE(rep2.ok);
}

TEST_CASE("pruned structure excludes the states named in the worked example") {
    auto p = ex2_pipeline();
    HAutomaton pruned = prune_candidates(p.hsup, p.gz);
    auto has_state = [&](int x, int obs, Pattern pat) {
        for (int s = 0; s < pruned.fsa.num_states(); ++s) {
            int gzs = pruned.gz_of[s];
            if (p.gz.is_init[gzs]) continue;
            if (p.gz.x_of[gzs] == x && p.gz.obs_of[gzs] == obs && p.gz.pat_of[gzs] == pat)
                return true;
        }
        return false;
    };
    auto pat = [&](std::initializer_list<const char*> names) {
        Pattern out = 0;
        for (auto nm : names) out |= Pattern{1} << p.g.base.require(nm);
        return out;
    };
    int b = p.g.base.require("b");
    CHECK_FALSE(has_state(2, b, pat({"v", "c"})));
    CHECK_FALSE(has_state(0, -1, pat({"a", "b", "v", "c"})));
    CHECK_FALSE(has_state(0, -1, pat({"a", "b", "d", "v", "c"})));
    CHECK_FALSE(has_state(0, -1, pat({"a", "d", "v", "c"})));
    CHECK(has_state(0, -1, pat({"a", "v", "c"})));
}

TEST_CASE("decide_resilient end to end on the worked examples") {
    auto ex2 = fixtures::example2();
    Decision d2 = decide_resilient(ex2.plant, ex2.damage, 1, {"c", "d"});
    REQUIRE(d2.exists);
    REQUIRE(d2.supervisor.has_value());
    Fsa g2 = apply_protected(ex2.plant, {"c", "d"});
    CHECK(d2.supervisor->entries == [&] {
        SupervisorMap m = ex2.resilient;
        // rebuild over the protected alphabet (same masks, same names)
        return m.entries;
    }());

    // empty damage: exists with a fully permissive root pattern
    auto ex3 = fixtures::example3();
    Decision d3 = decide_resilient(ex3.plant, ex3.damage, 1, {});
    REQUIRE(d3.exists);
    CHECK(d3.supervisor->entries == ex3.extracted.entries);
    CHECK(d3.supervisor->entries.at({}) == full_mask(ex3.plant.base));
}

TEST_CASE("decide_resilient rejects eps-damage outright") {
    BaseAlphabet base({{"a", true, true, false}});
    Fsa g;
    g.base = base;
    g.syms = SymbolTable::base(base);
    g.initial = g.add_state("0", true);
    Fsa d = recognizer(base, g.syms, {{}});
    Decision dec = decide_resilient(g, d, 1, {});
    CHECK_FALSE(dec.exists);
}
