#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "pslab/rational.hpp"

namespace pslab {

// A program variable. Lexicographic order gives the canonical key order
// used everywhere states are printed, hashed or compared.
class VarName {
public:
    explicit VarName(std::string name);
    const std::string& str() const { return name_; }

    friend bool operator==(const VarName& a, const VarName& b) { return a.name_ == b.name_; }
    friend std::strong_ordering operator<=>(const VarName& a, const VarName& b) {
        return a.name_ <=> b.name_;
    }

    static bool is_valid(std::string_view name);

private:
    std::string name_;
};

using VarSet = std::set<VarName>;

std::string to_string(const VarSet& vars); // "{X, Y}"

// A finite partial map from variables to integers. Lookups outside the
// domain are the distinguished undefined outcome (nullptr here).
class State {
public:
    State() = default;
    explicit State(std::map<VarName, Integer> bindings) : bindings_(std::move(bindings)) {}

    const std::map<VarName, Integer>& bindings() const { return bindings_; }
    bool empty() const { return bindings_.empty(); }

    const Integer* lookup(const VarName& x) const;
    bool defines(const VarName& x) const { return bindings_.contains(x); }
    VarSet domain() const;

    // result(x) = n, result(y) = this(y) for y != x.
    State update(const VarName& x, Integer n) const;

    // Defined exactly on Dom ∩ vars, with this state's values.
    State restrict_to(const VarSet& vars) const;

    bool is_total(const VarSet& vars) const;

    std::string str() const; // "{X:0, Y:1}"

    bool operator==(const State& o) const { return bindings_ == o.bindings_; }
    bool operator!=(const State& o) const { return !(*this == o); }
    // Lexicographic on the sorted binding sequence; any total order works,
    // this one makes search enumeration and report output reproducible.
    bool operator<(const State& o) const;

private:
    std::map<VarName, Integer> bindings_;
};

// The natural partial order: every binding of a is present in b with the
// same value.
bool state_leq(const State& a, const State& b);

// Agrees with over where over is defined and with base elsewhere.
// over is always below the result; if over is below base, the result is base.
State mask(const State& base, const State& over);

std::uint64_t stable_hash(const State& s);

} // namespace pslab
