// dot.hpp -- Graphviz export with canonical node/edge ordering
#ifndef SENTINEL_DOT_HPP
#define SENTINEL_DOT_HPP

#include <string>

#include "sentinel/attack.hpp"
#include "sentinel/fsa.hpp"

namespace sentinel {

std::string fsa_to_dot(const Fsa& a, const std::string& name = "fsa");
std::string transducer_to_dot(const BaseAlphabet& base, const AttackTransducer& t,
                              const std::string& name = "attack");

} // namespace sentinel

#endif
