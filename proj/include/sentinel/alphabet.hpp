// alphabet.hpp -- events, base alphabets, control patterns
#ifndef SENTINEL_ALPHABET_HPP
#define SENTINEL_ALPHABET_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sentinel {

/// One event of the base alphabet. `shielded` marks a protected observable
/// event, i.e. one whose channel an attacker cannot alter.
struct Event {
    std::string name;
    bool controllable = false;
    bool observable = true;
    bool shielded = false; // "protected" is a keyword-ish trap; JSON field is "protected"
};

/// The base alphabet Sigma with its induced partitions.
class BaseAlphabet {
public:
    BaseAlphabet() = default;
    explicit BaseAlphabet(std::vector<Event> events);

    int size() const { return static_cast<int>(events_.size()); }
    const Event& at(int id) const { return events_.at(id); }
    const std::vector<Event>& events() const { return events_; }

    /// Index of an event name, -1 if absent.
    int find(const std::string& name) const;
    int require(const std::string& name) const;

    bool observable(int id) const { return events_[id].observable; }
    bool controllable(int id) const { return events_[id].controllable; }
    bool shielded(int id) const { return events_[id].shielded; }

    std::vector<int> observable_ids() const;
    std::vector<int> unobservable_ids() const;
    std::vector<int> controllable_ids() const;
    std::vector<int> uncontrollable_ids() const;
    std::vector<int> shielded_ids() const;

    bool operator==(const BaseAlphabet& o) const;

private:
    std::vector<Event> events_;
    std::map<std::string, int> index_;
};

/// A control pattern: a set of events containing every uncontrollable event.
/// Stored as a bitmask over base-alphabet ids (alphabets are capped at 64).
using Pattern = std::uint64_t;

Pattern uncontrollable_mask(const BaseAlphabet& a);
Pattern full_mask(const BaseAlphabet& a);
bool pattern_valid(const BaseAlphabet& a, Pattern p);
bool pattern_has(Pattern p, int ev);
std::string pattern_display(const BaseAlphabet& a, Pattern p);

/// Gamma = { gamma subseteq Sigma | Sigma_uc subseteq gamma }, enumerated in
/// canonical order: ascending bitmask over the controllable events in base
/// order. pattern(0) == Sigma_uc, pattern(count-1) == Sigma.
class Gamma {
public:
    explicit Gamma(const BaseAlphabet& a, std::uint64_t max_patterns = 0);

    std::uint64_t count() const { return count_; }
    Pattern pattern(std::uint64_t i) const;
    std::vector<Pattern> all() const;
    /// Index of a pattern in canonical order; throws if invalid.
    std::uint64_t index_of(Pattern p) const;

private:
    Pattern uc_mask_ = 0;
    std::vector<int> ctrl_ids_;
    std::uint64_t count_ = 1;
};

} // namespace sentinel

#endif
