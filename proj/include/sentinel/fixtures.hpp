// fixtures.hpp -- the bundled worked examples used by selftest and the suites
#ifndef SENTINEL_FIXTURES_HPP
#define SENTINEL_FIXTURES_HPP

#include "sentinel/attack.hpp"
#include "sentinel/fsa.hpp"
#include "sentinel/supervisor.hpp"

namespace sentinel::fixtures {

/// Example 1: all-observable five-event plant where replacing a by d and b by
/// e tricks the supervisor into enabling the damaging string abc.
struct Example1 {
    Fsa plant;
    Fsa damage;        // L_dam = {abc}
    SupervisorMap supervisor;
    int bound = 1;
};
Example1 example1();

/// Example 2: Sigma = {a,b,c,d,v}, Sigma_c = {a,b,d}, Sigma_o = {a,b,c,d},
/// protected {c,d}, L_dam = {ad}, n = 1.
struct Example2 {
    Fsa plant;
    Fsa damage;
    SupervisorMap resilient; // the worked resilient supervisor
    int bound = 1;
};
Example2 example2();

/// Example 3: Sigma = {a,b,v,c}, Sigma_c = {a}, Sigma_o = {a,b,c}; no damage
/// pruning (H = zeta(L(G))).
struct Example3 {
    Fsa plant;
    Fsa damage;              // empty damage language
    SupervisorMap extracted; // the worked five-entry supervisor
    int bound = 1;
};
Example3 example3();

} // namespace sentinel::fixtures

#endif
