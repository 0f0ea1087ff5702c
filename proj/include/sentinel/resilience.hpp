// resilience.hpp -- risky-pattern encoding, S*, P(H), control-feasible search
#ifndef SENTINEL_RESILIENCE_HPP
#define SENTINEL_RESILIENCE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sentinel/attack_synth.hpp"

namespace sentinel {

/// Canonical Sigma_o^eps x Gamma symbol table: the eps slot first, then the
/// observable events in base order, each crossed with Gamma in ascending
/// bitmask order.
SymbolTable aug_symbols(const BaseAlphabet& base, const Gamma& gamma);

/// D_iota over Sigma x Gamma: same states as D, edge (w,(sigma,gamma),w')
/// iff sigma in gamma and kappa(w,sigma) = w'. L_m(D_iota) = iota(L_dam).
Fsa build_D_iota(const Fsa& d, const Gamma& gamma, const RunConfig& cfg = {});

/// D_psi over (Sigma u Delta_n) x Gamma: protected/unobservable letters kept,
/// each attackable observable letter fanned out to every u in
/// Delta_n - Sigma_op sharing the target. L_m(D_psi) = psi(iota(L_dam)).
Fsa build_D_psi(const Fsa& d_iota, int n, const RunConfig& cfg = {});

/// D_nu over Sigma_o^eps x Gamma: per the nu clauses; multi-letter fakes
/// expand through fresh states with intermediate patterns containing their
/// letters. L_m(D_nu) = nu(psi(iota(L_dam))).
Fsa build_D_nu(const Fsa& d_psi, const Gamma& gamma, const RunConfig& cfg = {});

/// The augmented plant G_zeta (nondeterministic) with component maps.
struct GZeta {
    Fsa fsa;                      // Aug symbols
    std::vector<int> x_of;        // plant state per G_zeta state
    std::vector<int> obs_of;      // entry observation (-1 for the eps slot)
    std::vector<Pattern> pat_of;  // pattern component (Sigma at the initial)
    std::vector<char> is_init;    // the distinguished initial
};

GZeta build_G_zeta(const Fsa& g, const Gamma& gamma, const RunConfig& cfg = {});

/// Recognizer of H = zeta(L(G)) - p^{-1}(p(nu(psi(iota(L_dam)))))(...)^*,
/// with G_zeta's marking carried through. States expose their G_zeta part.
struct HAutomaton {
    Fsa fsa;                  // Aug symbols
    std::vector<int> gz_of;   // G_zeta state per H state
};

HAutomaton build_H(const GZeta& gz, const Fsa& d_nu, const Gamma& gamma,
                   const RunConfig& cfg = {});

/// Supremal conditionally controllable sublanguage: greatest fixpoint
/// deleting states that disable a feasible pattern-persistence letter
/// (eps,gamma). Returns the recognizer of S*.
HAutomaton sup_conditionally_controllable(const HAutomaton& h, const GZeta& gz);

/// State-estimate and marking-coreachability evaluators over S*-strings
/// (sequences of Aug symbol ids of the recognizer's table).
struct EstimateMaps {
    const Fsa* plant;
    const Fsa* recognizer;    // of S*, for domain validation

    std::set<int> f(const std::vector<int>& word) const;
    std::set<int> h(const std::vector<int>& word) const;
};

EstimateMaps estimate_maps(const HAutomaton& hsup, const Fsa& g);

/// The subset-construction P(H) with information-class bookkeeping.
struct PHAutomaton {
    Fsa fsa;                   // Aug symbols
    std::vector<int> q_of;     // H-recognizer state per P(H) state
    std::vector<int> obs_of;   // sigma component (-1 for eps)
    std::vector<int> class_of; // interned (sigma, U) class per state
    struct InfoClass {
        int obs = -1;              // sigma
        std::set<int> members;     // U: H-recognizer states
    };
    std::vector<InfoClass> classes;
};

PHAutomaton build_PH(const HAutomaton& hsup, const RunConfig& cfg = {});

/// A control feasible sub-automaton of P(H).
struct OmegaAutomaton {
    Fsa fsa;                            // Aug symbols
    std::vector<int> ph_of;             // P(H) state per Omega state
    std::map<int, Pattern> class_pattern; // chosen pattern per kept class id
};

/// Backtracking search over one-pattern-per-class assignments. Classes are
/// processed in BFS discovery order; patterns per class are ordered by
/// descending feasible enabled-set size, ties by ascending Gamma index.
/// Besides the five feasibility conditions, an accepted assignment must give
/// a nonblocking extracted closed loop (co-reachability of Omega alone can
/// miss unobservable drift; divergences are counted when requested).
/// Returns the first feasible Omega or nullopt after exhausting assignments.
std::optional<OmegaAutomaton> find_control_feasible(const PHAutomaton& ph, const HAutomaton& hsup,
                                                    const GZeta& gz, const Gamma& gamma,
                                                    const Fsa& plant,
                                                    std::uint64_t* search_nodes = nullptr,
                                                    std::uint64_t* coreach_divergences = nullptr);

/// Independent re-validation of the five control-feasibility conditions.
Report check_control_feasible(const OmegaAutomaton& omega, const PHAutomaton& ph,
                              const HAutomaton& hsup, const GZeta& gz, const Gamma& gamma);

/// Def.-2 conditional controllability, Def.-4 conditions 1-2 and Def.-3
/// nonblocking (via the f/h evaluators), checked on enumerations to `bound`.
Report check_candidate_language(const Fsa& candidate, const HAutomaton& hsup, const Fsa& g,
                                const GZeta& gz, int bound);

/// The candidate language a supervisor induces inside zeta(L(G)): initial
/// pattern V(eps), persistence self-loops, observable steps re-keyed by the
/// supervisor's response to the new observation.
Fsa induced_candidate(const GZeta& gz, const SupervisorFsa& sup);

/// Iterated pruning of S*'s recognizer: drop states that are blocking or that
/// disable a pattern-allowed feasible observation, to a fixpoint. This is the
/// structure all nonblocking resilient supervisor candidates live in.
HAutomaton prune_candidates(const HAutomaton& hsup, const GZeta& gz);

/// Supervisor extraction from a control feasible Omega: one entry per kept
/// class keyed by its shortest observation, plus the class-graph automaton
/// realization used for verification.
struct ExtractedSupervisor {
    SupervisorMap map;
    SupervisorFsa fsa;
};

ExtractedSupervisor extract_supervisor(const OmegaAutomaton& omega, const PHAutomaton& ph,
                                       const HAutomaton& hsup, const GZeta& gz,
                                       const BaseAlphabet& base);

struct DecisionStats {
    std::uint64_t gamma = 0;
    int gzeta_states = 0;
    int dnu_states = 0;
    int h_states = 0;
    int s_star_states = 0;
    int ph_states = 0;
    int classes = 0;
    std::uint64_t search_nodes = 0;
};

struct Decision {
    bool exists = false;
    std::optional<SupervisorMap> supervisor;
    std::optional<SupervisorFsa> supervisor_fsa;
    DecisionStats stats;
    std::vector<std::string> notes;

    std::string to_json(const BaseAlphabet& base) const;
};

/// Sets the protected flag on the named events of an automaton's alphabet.
Fsa apply_protected(const Fsa& a, const std::vector<std::string>& names);

/// The full decision pipeline. Every Exists outcome is post-verified by
/// running attack synthesis against the extracted supervisor; a synthesized
/// attack would be a soundness bug and throws.
Decision decide_resilient(const Fsa& g, const Fsa& d, int n,
                          const std::vector<std::string>& protected_names,
                          const RunConfig& cfg = {});

} // namespace sentinel

#endif
