#include <doctest.h>

#include "oracles.hpp"
#include "sentinel/attack_synth.hpp"
#include "sentinel/fixtures.hpp"

using namespace sentinel;

namespace {

SupervisorFsa realize(const Fsa& g, const SupervisorMap& m) {
    return supervisor_to_fsa(g.base, m);
}

} // namespace

TEST_CASE("example 1: the risky pair is (abc, d e eps)") {
    auto ex = fixtures::example1();
    auto pair = find_risky_pair(ex.plant, Supervisor{ex.supervisor}, ex.damage, RunConfig{});
    REQUIRE(pair.has_value());
    const BaseAlphabet& base = ex.plant.base;
    CHECK(event_string_display(base, pair->damage_string) == "abc");
    REQUIRE(pair->fakes.size() == 3);
    CHECK(event_string_display(base, pair->fakes[0]) == "d");
    CHECK(event_string_display(base, pair->fakes[1]) == "e");
    CHECK(pair->fakes[2].empty());
    for (const auto& seg : pair->segments) CHECK(seg.empty()); // u_i all empty
}

TEST_CASE("empty damage language yields no risky pair") {
    auto ex = fixtures::example3();
    auto pair = find_risky_pair(ex.plant, Supervisor{ex.extracted}, ex.damage, RunConfig{});
    CHECK_FALSE(pair.has_value());
}

TEST_CASE("single unobservable uncontrollable damage event forces a pair with r=0") {
    BaseAlphabet base({{"a", true, true, false}, {"v", false, false, false}});
    Fsa g;
    g.base = base;
    g.syms = SymbolTable::base(base);
    g.initial = g.add_state("0", true);
    int dam = g.add_state("xdam");
    g.add_edge(0, base.require("v"), dam);
    Fsa d = recognizer(base, g.syms, {{base.require("v")}});
    SupervisorMap v;
    v.fallback = uncontrollable_mask(base);
    auto pair = find_risky_pair(g, Supervisor{v}, d, RunConfig{});
    REQUIRE(pair.has_value());
    CHECK(pair->fakes.empty()); // r = 0, t = eps
    REQUIRE(pair->segments.size() == 1);
    CHECK(event_string_display(base, pair->segments[0]) == "v");
}

TEST_CASE("psi with n=0 reduces to the G x S x D product") {
    auto ex = fixtures::example1();
    SupervisorFsa s = realize(ex.plant, ex.supervisor);
    PsiAutomaton psi = build_psi(ex.plant, s, ex.damage, 0);
    for (int sym = 0; sym < psi.fsa.syms.size(); ++sym) {
        const Symbol& sy = psi.fsa.syms.at(sym);
        CHECK(sy.comps.at(2).kind == CompKind::Eps); // every fake is eps
    }
    // pi-image of L(Psi) equals the closed loop (attacks erased everything,
    // but with n=0 the only fake is eps => supervisor never advances).
    CHECK(psi.fsa.num_states() > 0);
}

TEST_CASE("unobservable events carry (sigma,eps,eps) in psi") {
    auto ex = fixtures::example2();
    SupervisorFsa s = realize(ex.plant, ex.resilient);
    PsiAutomaton psi = build_psi(ex.plant, s, ex.damage, 1);
    for (int sym = 0; sym < psi.fsa.syms.size(); ++sym) {
        const Symbol& sy = psi.fsa.syms.at(sym);
        int ev = sy.comps.at(0).ev;
        if (!ex.plant.base.observable(ev)) {
            CHECK(sy.comps.at(1).kind == CompKind::Eps);
            CHECK(sy.comps.at(2).kind == CompKind::Eps);
        }
    }
}

TEST_CASE("example 1: psi contains a path with pi-image abc and varpi-image de") {
    auto ex = fixtures::example1();
    SupervisorFsa s = realize(ex.plant, ex.supervisor);
    PsiAutomaton psi = build_psi(ex.plant, s, ex.damage, 1);
    const BaseAlphabet& base = ex.plant.base;
    bool found = false;
    for (const auto& w : enumerate_language(psi.fsa, 3)) {
        if (event_string_display(base, psi.pi(w)) == "abc" &&
            event_string_display(base, psi.varpi(w)) == "de")
            found = true;
    }
    CHECK(found);
}

TEST_CASE("synthesized attack on example 1 passes the verdict and U conditions") {
    auto ex = fixtures::example1();
    RunConfig cfg;
    auto attack = synthesize_attack(ex.plant, Supervisor{ex.supervisor}, ex.damage, cfg);
    REQUIRE(attack.has_value());
    // the planned branch realizes a->d then b->e
    const BaseAlphabet& base = ex.plant.base;
    auto out = transducer_output(*attack, {base.require("a"), base.require("b")});
    REQUIRE(out.has_value());
    CHECK(event_string_display(base, *out) == "de");
    auto verdict = check_smart_attack(ex.plant, Supervisor{ex.supervisor}, *attack, ex.damage,
                                      DamageMode::Weak, cfg);
    CHECK(verdict.smart);

    // U induced by the attack passes all four Theorem-2 conditions.
    SupervisorFsa s = realize(ex.plant, ex.supervisor);
    PsiAutomaton psi = build_psi(ex.plant, s, ex.damage, 1);
    PsiAutomaton u = build_psi(ex.plant, s, ex.damage, 1, &*attack);
    Report rep = verify_U_conditions(u.fsa, psi, ex.plant, s, 4);
    CHECK(rep.ok);
}

TEST_CASE("the empty U fails weak nonblocking") {
    auto ex = fixtures::example1();
    SupervisorFsa s = realize(ex.plant, ex.supervisor);
    PsiAutomaton psi = build_psi(ex.plant, s, ex.damage, 1);
    Fsa empty;
    empty.base = psi.fsa.base;
    empty.syms = psi.fsa.syms;
    empty.initial = empty.add_state("0");
    Report rep = verify_U_conditions(empty, psi, ex.plant, s, 3);
    CHECK_FALSE(rep.ok);
}

TEST_CASE("a varpi-inconsistent U is rejected") {
    // Build a tiny psi and a U that answers two P_o-pi-equal strings with
    // different fakes.
    BaseAlphabet base({{"a", true, true, false}, {"b", true, true, false}});
    Fsa g;
    g.base = base;
    g.syms = SymbolTable::base(base);
    g.initial = g.add_state("0", true);
    int one = g.add_state("1", true);
    g.add_edge(0, 0, one);
    SupervisorMap vm;
    vm.fallback = 0;
    vm.entries[{}] = full_mask(base);
    vm.entries[{0}] = full_mask(base);
    vm.entries[{1}] = full_mask(base);
    SupervisorFsa s = supervisor_to_fsa(base, vm);
    Fsa d = recognizer(base, g.syms, {});
    PsiAutomaton psi = build_psi(g, s, d, 1);
    // U: initial state with two (a,a,u) letters for different u reached by
    // the same pi-image "a": varpi must then disagree.
    Fsa u;
    u.base = psi.fsa.base;
    u.syms = psi.fsa.syms;
    u.initial = u.add_state("0", true);
    int x1 = u.add_state("1", true);
    int x2 = u.add_state("2", true);
    int sym_aa = -1, sym_ab = -1;
    for (int sym = 0; sym < psi.fsa.syms.size(); ++sym) {
        const Symbol& sy = psi.fsa.syms.at(sym);
        if (sy.comps.at(0).ev != base.require("a")) continue;
        if (sy.comps.at(2).kind == CompKind::Ev && sy.comps.at(2).ev == base.require("a"))
            sym_aa = sym;
        if (sy.comps.at(2).kind == CompKind::Ev && sy.comps.at(2).ev == base.require("b"))
            sym_ab = sym;
    }
    REQUIRE(sym_aa >= 0);
    REQUIRE(sym_ab >= 0);
    u.add_edge(0, sym_aa, x1);
    u.add_edge(0, sym_ab, x2);
    Report rep = verify_U_conditions(u, psi, g, s, 2);
    CHECK_FALSE(rep.ok);
}

TEST_CASE("theorem-1 search agrees with the exhaustive oracle on random instances") {
    std::mt19937_64 rng(101);
    int done = 0;
    while (done < 30) {
        oracles::RandomSpec spec;
        spec.max_states = 4;
        spec.max_events = 4;
        Fsa g = oracles::random_plant(rng, spec);
        SupervisorMap v = oracles::random_supervisor(rng, g, 2);
        // damage: random subset of plant strings outside the closed loop
        auto lg = oracles::plant_strings(g, 3);
        auto loop = oracles::closed_loop_strings(g, Supervisor{v}, 3);
        std::vector<std::vector<int>> cand;
        for (const auto& w : lg)
            if (!w.empty() && !loop.count(w)) cand.push_back(w);
        if (cand.empty()) continue;
        std::vector<std::vector<int>> words{cand[rng() % cand.size()]};
        Fsa d = recognizer(g.base, g.syms, words);
        ++done;
        RunConfig cfg;
        cfg.bound = 1;
        int bound = 6;
        auto mine = find_risky_pair(g, Supervisor{v}, d, cfg);
        auto oracle = oracles::risky_pair_oracle(g, Supervisor{v}, d, 1, bound);
        bool mine_bounded = mine && static_cast<int>(mine->damage_string.size()) <= bound;
        CHECK(mine_bounded == oracle.has_value());
        if (mine) {
            // soundness: re-check the three conditions on the returned pair
            auto check = oracles::risky_pair_oracle(g, Supervisor{v}, d, 1,
                                                    static_cast<int>(mine->damage_string.size()));
            CHECK(check.has_value());
        }
    }
}

TEST_CASE("synthesize_attack succeeds exactly when a risky pair exists") {
    std::mt19937_64 rng(202);
    int done = 0;
    while (done < 15) {
        oracles::RandomSpec spec;
        spec.max_states = 4;
        spec.max_events = 3;
        Fsa g = oracles::random_plant(rng, spec);
        SupervisorMap v = oracles::random_supervisor(rng, g, 2);
        auto lg = oracles::plant_strings(g, 3);
        auto loop = oracles::closed_loop_strings(g, Supervisor{v}, 3);
        std::vector<std::vector<int>> cand;
        for (const auto& w : lg)
            if (!w.empty() && !loop.count(w)) cand.push_back(w);
        if (cand.empty()) continue;
        Fsa d = recognizer(g.base, g.syms, {cand[rng() % cand.size()]});
        ++done;
        RunConfig cfg;
        cfg.bound = 1;
        auto pair = find_risky_pair(g, Supervisor{v}, d, cfg);
        auto attack = synthesize_attack(g, Supervisor{v}, d, cfg);
        CHECK(pair.has_value() == attack.has_value());
        if (attack) {
            auto verdict = check_smart_attack(g, Supervisor{v}, *attack, d, DamageMode::Weak, cfg);
            CHECK(verdict.smart);
        }
    }
}
