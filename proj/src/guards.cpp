#include "sentinel/guards.hpp"

#include <cstdlib>
#include <iostream>
#include <stdexcept>

namespace sentinel {

void RunConfig::validate() const {
    if (bound < 0) throw std::invalid_argument("bound n must be >= 0");
    if (max_patterns == 0 || max_states == 0)
        throw std::invalid_argument("guards must be positive");
    if (enum_bound < 0) throw std::invalid_argument("enum bound must be >= 0");
}

bool RunConfig::guards_from_env() {
    const char* v = std::getenv("DES_SENTINEL_GUARDS");
    if (v && std::string(v) == "off") {
        std::cerr << "warning: DES_SENTINEL_GUARDS=off disables size guards; "
                     "large instances may exhaust memory\n";
        return false;
    }
    return true;
}

void guard_states(const RunConfig& cfg, std::uint64_t amount, const std::string& what) {
    if (!cfg.guards_enabled) return;
    if (amount > cfg.max_states)
        throw std::runtime_error("guard exceeded: " + what + " needs " + std::to_string(amount) +
                                 " states (max " + std::to_string(cfg.max_states) + ")");
}

} // namespace sentinel
