// guards.hpp -- run configuration and size guards
#ifndef SENTINEL_GUARDS_HPP
#define SENTINEL_GUARDS_HPP

#include <cstdint>
#include <string>

namespace sentinel {

struct RunConfig {
    int bound = 1;                        // n, the fake-string length bound
    std::uint64_t max_patterns = 4096;    // |Gamma| guard
    std::uint64_t max_states = 2000000;   // construction-size guard
    int enum_bound = 5;                   // test-enumeration length
    std::uint64_t seed = 1;               // randomized-suite seed
    bool guards_enabled = true;           // DES_SENTINEL_GUARDS=off disables

    void validate() const;
    /// Reads DES_SENTINEL_GUARDS; prints a warning to stderr when off.
    static bool guards_from_env();
};

/// Throws when `amount` exceeds the configured guard and guards are on.
void guard_states(const RunConfig& cfg, std::uint64_t amount, const std::string& what);

} // namespace sentinel

#endif
