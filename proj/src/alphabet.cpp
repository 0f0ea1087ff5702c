#include "sentinel/alphabet.hpp"

#include <algorithm>

namespace sentinel {

BaseAlphabet::BaseAlphabet(std::vector<Event> events) : events_(std::move(events)) {
    if (events_.size() > 64)
        throw std::invalid_argument("alphabet too large (at most 64 events supported)");
    for (int i = 0; i < static_cast<int>(events_.size()); ++i) {
        const Event& e = events_[i];
        if (e.name.empty())
            throw std::invalid_argument("event name must be non-empty");
        if (e.name == "eps")
            throw std::invalid_argument("'eps' is reserved and cannot name an event");
        if (e.shielded && !e.observable)
            throw std::invalid_argument("protected event '" + e.name + "' must be observable");
        if (!index_.emplace(e.name, i).second)
            throw std::invalid_argument("duplicate event name '" + e.name + "'");
    }
}

int BaseAlphabet::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

int BaseAlphabet::require(const std::string& name) const {
    int id = find(name);
    if (id < 0) throw std::invalid_argument("unknown event '" + name + "'");
    return id;
}

static std::vector<int> ids_where(const BaseAlphabet& a, bool (*pred)(const Event&)) {
    std::vector<int> out;
    for (int i = 0; i < a.size(); ++i)
        if (pred(a.at(i))) out.push_back(i);
    return out;
}

std::vector<int> BaseAlphabet::observable_ids() const {
    return ids_where(*this, [](const Event& e) { return e.observable; });
}
std::vector<int> BaseAlphabet::unobservable_ids() const {
    return ids_where(*this, [](const Event& e) { return !e.observable; });
}
std::vector<int> BaseAlphabet::controllable_ids() const {
    return ids_where(*this, [](const Event& e) { return e.controllable; });
}
std::vector<int> BaseAlphabet::uncontrollable_ids() const {
    return ids_where(*this, [](const Event& e) { return !e.controllable; });
}
std::vector<int> BaseAlphabet::shielded_ids() const {
    return ids_where(*this, [](const Event& e) { return e.shielded; });
}

bool BaseAlphabet::operator==(const BaseAlphabet& o) const {
    if (size() != o.size()) return false;
    for (int i = 0; i < size(); ++i) {
        const Event &a = events_[i], &b = o.events_[i];
        if (a.name != b.name || a.controllable != b.controllable ||
            a.observable != b.observable || a.shielded != b.shielded)
            return false;
    }
    return true;
}

Pattern uncontrollable_mask(const BaseAlphabet& a) {
    Pattern m = 0;
    for (int i = 0; i < a.size(); ++i)
        if (!a.controllable(i)) m |= Pattern{1} << i;
    return m;
}

Pattern full_mask(const BaseAlphabet& a) {
    return a.size() == 64 ? ~Pattern{0} : (Pattern{1} << a.size()) - 1;
}

bool pattern_valid(const BaseAlphabet& a, Pattern p) {
    return (p & uncontrollable_mask(a)) == uncontrollable_mask(a) &&
           (p & ~full_mask(a)) == 0;
}

bool pattern_has(Pattern p, int ev) { return (p >> ev) & 1; }

std::string pattern_display(const BaseAlphabet& a, Pattern p) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < a.size(); ++i) {
        if (!pattern_has(p, i)) continue;
        if (!first) out += ",";
        out += a.at(i).name;
        first = false;
    }
    out += "}";
    return out;
}

Gamma::Gamma(const BaseAlphabet& a, std::uint64_t max_patterns)
    : uc_mask_(uncontrollable_mask(a)), ctrl_ids_(a.controllable_ids()) {
    if (ctrl_ids_.size() >= 63)
        throw std::runtime_error("too many controllable events to enumerate Gamma");
    count_ = std::uint64_t{1} << ctrl_ids_.size();
    if (max_patterns != 0 && count_ > max_patterns)
        throw std::runtime_error("control-pattern family exceeds the max-patterns guard (" +
                                 std::to_string(count_) + " > " + std::to_string(max_patterns) + ")");
}

Pattern Gamma::pattern(std::uint64_t i) const {
    if (i >= count_) throw std::out_of_range("pattern index out of range");
    Pattern p = uc_mask_;
    for (std::size_t b = 0; b < ctrl_ids_.size(); ++b)
        if ((i >> b) & 1) p |= Pattern{1} << ctrl_ids_[b];
    return p;
}

std::vector<Pattern> Gamma::all() const {
    std::vector<Pattern> out;
    out.reserve(count_);
    for (std::uint64_t i = 0; i < count_; ++i) out.push_back(pattern(i));
    return out;
}

std::uint64_t Gamma::index_of(Pattern p) const {
    if ((p & uc_mask_) != uc_mask_)
        throw std::invalid_argument("pattern drops an uncontrollable event");
    std::uint64_t i = 0;
    Pattern rest = p & ~uc_mask_;
    for (std::size_t b = 0; b < ctrl_ids_.size(); ++b) {
        Pattern bit = Pattern{1} << ctrl_ids_[b];
        if (rest & bit) {
            i |= std::uint64_t{1} << b;
            rest &= ~bit;
        }
    }
    if (rest != 0) throw std::invalid_argument("pattern contains unknown events");
    return i;
}

} // namespace sentinel
