// supervisor.hpp -- control patterns, supervisors, closed loops
#ifndef SENTINEL_SUPERVISOR_HPP
#define SENTINEL_SUPERVISOR_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sentinel/fsa.hpp"
#include "sentinel/guards.hpp"
#include "sentinel/ops.hpp"

namespace sentinel {

/// Observation strings are sequences of observable base-event ids.
using ObsWord = std::vector<int>;

/// A finite supervisory control map: observation string -> pattern, with a
/// default pattern (Sigma_uc unless stated) for unmapped observations.
struct SupervisorMap {
    std::map<ObsWord, Pattern> entries;
    Pattern fallback = 0;

    Pattern at(const ObsWord& obs) const {
        auto it = entries.find(obs);
        return it == entries.end() ? fallback : it->second;
    }
};

/// A supervisor realized as an automaton S = (Z, Sigma, delta, z0, Z_m = Z):
/// all states marked, unobservable events self-looped when enabled,
/// observation-deterministic.
struct SupervisorFsa {
    Fsa fsa;
};

/// Either representation.
using Supervisor = std::variant<SupervisorMap, SupervisorFsa>;

/// Gamma for the alphabet, guarded by max_patterns.
Gamma control_patterns(const BaseAlphabet& a, const RunConfig& cfg = {});

/// Observation-tree realization of a map (states: prefix tree of the entry
/// keys plus a default-pattern sink).
SupervisorFsa supervisor_to_fsa(const BaseAlphabet& base, const SupervisorMap& v);

/// En_S(z) as a pattern bitmask.
Pattern enabled_pattern(const SupervisorFsa& s, int state);

/// Recognizer of L(V/G); marked language L_m(G) cap L(V/G).
Fsa closed_loop(const Fsa& g, const Supervisor& v);

struct Report {
    bool ok = true;
    std::vector<std::string> issues;
    void fail(const std::string& msg) {
        ok = false;
        issues.push_back(msg);
    }
};

/// Checks uncontrollable preservation on the closed loop and, for automaton
/// supervisors, the finite-representability shape (all marked, unobservable
/// self-loops, observation determinism). L_m(G)-closedness of the closed
/// loop is reported as informational text, never as a failure.
Report validate_supervisor(const Fsa& g, const Supervisor& v);

/// Every reachable state coreachable.
bool is_nonblocking(const Fsa& a);

} // namespace sentinel

#endif
