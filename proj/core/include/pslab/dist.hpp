#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pslab/rational.hpp"

namespace pslab {

// Finite discrete probability distribution with support-only storage:
// every stored weight is strictly positive and the weights sum to exactly 1.
template <typename A>
class Dist {
public:
    using Map = std::map<A, Rational>;

    static Dist point(A value) {
        Map m;
        m.emplace(std::move(value), Rational(1));
        return Dist(std::move(m), AlreadyChecked{});
    }

    // Aggregates duplicate values, drops zero weights, rejects negative
    // weights and any total other than 1.
    static Dist from_weights(const std::vector<std::pair<A, Rational>>& entries) {
        Map m;
        Rational total;
        for (const auto& [value, weight] : entries) {
            if (weight.is_negative()) {
                throw std::invalid_argument("distribution weight is negative");
            }
            if (weight.is_zero()) continue;
            m[value] += weight;
            total += weight;
        }
        if (!total.is_one()) {
            throw std::invalid_argument("distribution weights sum to " + total.str() + ", expected 1");
        }
        return Dist(std::move(m), AlreadyChecked{});
    }

    const Map& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }

    // 0 outside the support.
    Rational at(const A& value) const {
        auto it = entries_.find(value);
        return it == entries_.end() ? Rational(0) : it->second;
    }

    bool operator==(const Dist& o) const { return entries_ == o.entries_; }
    bool operator<(const Dist& o) const { return entries_ < o.entries_; }

private:
    struct AlreadyChecked {};
    Dist(Map m, AlreadyChecked) : entries_(std::move(m)) {}
    Map entries_;
};

} // namespace pslab
