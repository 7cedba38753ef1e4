#include "pslab/state.hpp"

#include <sstream>
#include <stdexcept>

#include "pslab/hash.hpp"

namespace pslab {

bool VarName::is_valid(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    for (char c : name.substr(1)) {
        if (!alpha(c) && !digit(c)) return false;
    }
    return true;
}

VarName::VarName(std::string name) : name_(std::move(name)) {
    if (!is_valid(name_)) {
        throw std::invalid_argument("invalid variable name: '" + name_ + "'");
    }
}

std::string to_string(const VarSet& vars) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& v : vars) {
        if (!first) os << ", ";
        first = false;
        os << v.str();
    }
    os << "}";
    return os.str();
}

const Integer* State::lookup(const VarName& x) const {
    auto it = bindings_.find(x);
    return it == bindings_.end() ? nullptr : &it->second;
}

VarSet State::domain() const {
    VarSet out;
    for (const auto& [name, value] : bindings_) out.insert(name);
    return out;
}

State State::update(const VarName& x, Integer n) const {
    auto next = bindings_;
    next.insert_or_assign(x, std::move(n));
    return State(std::move(next));
}

State State::restrict_to(const VarSet& vars) const {
    std::map<VarName, Integer> next;
    for (const auto& [name, value] : bindings_) {
        if (vars.contains(name)) next.emplace(name, value);
    }
    return State(std::move(next));
}

bool State::is_total(const VarSet& vars) const {
    for (const auto& v : vars) {
        if (!bindings_.contains(v)) return false;
    }
    return true;
}

std::string State::str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [name, value] : bindings_) {
        if (!first) os << ", ";
        first = false;
        os << name.str() << ":" << value.get_str();
    }
    os << "}";
    return os.str();
}

bool State::operator<(const State& o) const {
    auto a = bindings_.begin();
    auto b = o.bindings_.begin();
    for (; a != bindings_.end() && b != o.bindings_.end(); ++a, ++b) {
        if (a->first != b->first) return a->first < b->first;
        int c = cmp(a->second, b->second);
        if (c != 0) return c < 0;
    }
    return a == bindings_.end() && b != o.bindings_.end();
}

bool state_leq(const State& a, const State& b) {
    for (const auto& [name, value] : a.bindings()) {
        const Integer* other = b.lookup(name);
        if (other == nullptr || *other != value) return false;
    }
    return true;
}

State mask(const State& base, const State& over) {
    auto merged = base.bindings();
    for (const auto& [name, value] : over.bindings()) {
        merged.insert_or_assign(name, value);
    }
    return State(std::move(merged));
}

std::uint64_t stable_hash(const State& s) {
    Fnv fnv;
    for (const auto& [name, value] : s.bindings()) {
        fnv.feed(name.str());
        fnv.feed_byte('=');
        fnv.feed(value.get_str());
        fnv.feed_byte(';');
    }
    return fnv.value();
}

} // namespace pslab
