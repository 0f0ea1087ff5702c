// attack_synth.hpp -- risky pairs, the Psi product, weak-attack synthesis
#ifndef SENTINEL_ATTACK_SYNTH_HPP
#define SENTINEL_ATTACK_SYNTH_HPP

#include <optional>
#include <string>
#include <vector>

#include "sentinel/attack.hpp"

namespace sentinel {

/// A Theorem-1 witness: a damage string s = u_1 s_1 ... u_r s_r u_{r+1}
/// (u_i unobservable segments, s_i observable events) together with the fake
/// observation chunks t = nu_1 ... nu_r the attacker feeds the supervisor.
struct RiskyPair {
    std::vector<int> damage_string;            // over base event ids
    std::vector<std::vector<int>> segments;    // r pairs [u_i, {s_i}] then [u_{r+1}]
    std::vector<int> observables;              // s_1..s_r
    std::vector<ObsWord> fakes;                // nu_1..nu_r

    std::string to_json(const BaseAlphabet& base) const;
};

/// Reachability search for a risky pair: configurations (plant state, damage
/// state, supervisor state, closed-loop-observer state). Shortest witness,
/// fakes tried in shortlex order. Protected observable events can only be
/// relayed verbatim. Returns nullopt iff no smart weak sensor attack exists.
std::optional<RiskyPair> find_risky_pair(const Fsa& g, const Supervisor& v, const Fsa& d,
                                         const RunConfig& cfg = {});

/// The Theorem-2 product Psi over Sigma_N = Sigma x Sigma_o^eps x Delta_n.
/// States are tuples of (plant, supervisor, transducer, damage) states; the
/// transducer defaults to the universal single-state one containing every
/// attack move.
struct PsiAutomaton {
    Fsa fsa;                                 // over SymbolKind::SigmaN
    std::vector<int> plant_of;               // per state: component ids
    std::vector<int> sup_of;
    std::vector<int> trans_of;
    std::vector<int> damage_of;
    std::vector<char> damage_marked;         // w in W_m
    std::vector<char> controllable_sym;      // per symbol: in Sigma_{N,c}

    std::vector<int> pi(const std::vector<int>& word) const;      // event components
    ObsWord varpi(const std::vector<int>& word) const;            // fake components
};

PsiAutomaton build_psi(const Fsa& g, const SupervisorFsa& s, const Fsa& d, int n,
                       const AttackTransducer* attack = nullptr, const RunConfig& cfg = {});

/// Synthesizes a smart weak sensor attack from a risky pair: the planned
/// prefix maps s_1..s_i to nu_1..nu_i, other observations echo while the
/// cumulative output stays in P_o(L(V/G)) and freeze afterwards.
std::optional<AttackTransducer> synthesize_attack(const Fsa& g, const Supervisor& v, const Fsa& d,
                                                  const RunConfig& cfg = {});

/// Bounded verification of the Theorem-2 conditions for a prefix-closed
/// U subseteq L(Psi): controllability w.r.t. Sigma_{N,uc}, weak nonblocking,
/// extended controllability (enabled-set equality) and extended observability
/// (varpi agreement on P_o-pi-equal strings).
Report verify_U_conditions(const Fsa& u_candidate, const PsiAutomaton& psi, const Fsa& g,
                           const SupervisorFsa& s, int bound);

} // namespace sentinel

#endif
