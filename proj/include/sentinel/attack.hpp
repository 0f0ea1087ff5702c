// attack.hpp -- bounded fake strings, attack transducers, Def.-1 verdicts
#ifndef SENTINEL_ATTACK_HPP
#define SENTINEL_ATTACK_HPP

#include <optional>
#include <string>
#include <vector>

#include "sentinel/supervisor.hpp"

namespace sentinel {

/// Delta_n: all observable strings of length <= n, shortlex over the base
/// alphabet's observable events in declaration order.
std::vector<ObsWord> bounded_obs_strings(const BaseAlphabet& a, int n,
                                         const RunConfig& cfg = {});

/// A finite-state sensor-attack transducer over Sigma_o^eps x Delta_n.
/// All states are marked by definition. eps-input transitions must be
/// output-free self-loops.
struct AttackTransducer {
    std::vector<std::string> states;
    int initial = 0;
    struct Edge {
        int src;
        int input;       // observable event id, or -1 for eps
        ObsWord output;  // in Delta_n
        int dst;
    };
    std::vector<Edge> edges;

    int num_states() const { return static_cast<int>(states.size()); }
    /// The unique transition on an observable input, nullptr when undefined.
    const Edge* on_input(int state, int ev) const;
};

/// Identity transducer over the observable events (sigma -> sigma).
AttackTransducer identity_transducer(const BaseAlphabet& a);

/// Structural checks: eps-rule, input determinism (at most one transition per
/// (state, input)), output lengths within n. With a plant: input-completeness
/// I(L(A)) = P_o(L(G)).
Report validate_transducer(const BaseAlphabet& a, const AttackTransducer& t, int n,
                           const Fsa* plant = nullptr);

/// Output image A(o) for an observation o, nullopt when the transducer does
/// not accept o.
std::optional<ObsWord> transducer_output(const AttackTransducer& t, const ObsWord& input);

/// Recognizer of L(V o A / G): the plant composed with the transducer and the
/// supervisor driven by the transducer's output. Marked: L_m(G) cap L.
Fsa attacked_closed_loop(const Fsa& g, const Supervisor& v, const AttackTransducer& a,
                         const RunConfig& cfg = {});

enum class DamageMode { Weak, Strong };

struct SmartVerdict {
    bool covert = false;
    bool damage = false;
    bool control_feasible = false;
    bool smart = false;
    std::vector<std::string> notes;
};

/// Def.-1 check. `d` recognizes L_dam as its marked language; requires
/// L_dam subseteq L(G) - L(V/G).
SmartVerdict check_smart_attack(const Fsa& g, const Supervisor& v, const AttackTransducer& a,
                                const Fsa& d, DamageMode mode, const RunConfig& cfg = {});

/// Recognizer (marked language) of A(P_o(L(G))): every complete output the
/// transducer produces on plant observations.
Fsa attack_output_language(const Fsa& g, const AttackTransducer& a);

/// Recognizer of P_o(L(G)) (closed language), i.e. the plant observer.
Fsa observer(const Fsa& g);

} // namespace sentinel

#endif
