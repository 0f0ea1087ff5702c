// json_io.hpp -- (de)serialization of all artifact file formats
#ifndef SENTINEL_JSON_IO_HPP
#define SENTINEL_JSON_IO_HPP

#include <string>

#include "sentinel/attack.hpp"
#include "sentinel/fsa.hpp"
#include "sentinel/supervisor.hpp"

namespace sentinel {

/// Automaton JSON:
/// {"alphabet":[{"name":"a","controllable":true,"observable":true,"protected":false},...],
///  "states":["0","1"],"initial":"0","marked":["1"],
///  "transitions":[["0","a","1"],...]}
/// Tuple-symbol automata additionally carry "symbol_kind":
/// "aug" | "sigma_n" | "fanout_gamma" | "gamma" (default "base").
std::string fsa_to_json(const Fsa& a);
Fsa fsa_from_json(const std::string& text);

/// SupervisorMap JSON:
/// {"default":["c","v"],"entries":{"":["a","v","c"],"a":["v","c"]}}
std::string supervisor_map_to_json(const BaseAlphabet& base, const SupervisorMap& v);
SupervisorMap supervisor_map_from_json(const BaseAlphabet& base, const std::string& text);

/// AttackTransducer JSON:
/// {"states":["y0","y1"],"initial":"y0",
///  "transitions":[["y0","a","d","y1"],["y0","eps","","y0"]]}
std::string transducer_to_json(const BaseAlphabet& base, const AttackTransducer& a);
AttackTransducer transducer_from_json(const BaseAlphabet& base, const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace sentinel

#endif
