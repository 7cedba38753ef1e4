#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "pslab/dist.hpp"
#include "pslab/errors.hpp"
#include "pslab/rational.hpp"

namespace pslab {

// An A-valued random variable over an explicit finite sample space.
// The sample space is the index set {0..n-1}; point i carries weight
// p(i) > 0 and value v(i). Weights sum to exactly 1 and there are no
// zero-probability sample points. Distinct points may carry equal values;
// the family is deliberately not deduplicated.
template <typename A>
class SampleFamily {
public:
    using Point = std::pair<Rational, A>;

    explicit SampleFamily(std::vector<Point> points) : points_(std::move(points)) {
        if (points_.empty()) {
            throw std::invalid_argument("sample family must have at least one point");
        }
        Rational total;
        for (const auto& [weight, value] : points_) {
            if (!weight.is_positive()) {
                throw std::invalid_argument("sample point weight must be strictly positive");
            }
            total += weight;
        }
        if (!total.is_one()) {
            throw std::invalid_argument("sample point weights sum to " + total.str() + ", expected 1");
        }
    }

    std::size_t size() const { return points_.size(); }
    const Rational& weight(std::size_t i) const { return points_.at(i).first; }
    const A& value(std::size_t i) const { return points_.at(i).second; }
    const std::vector<Point>& points() const { return points_; }

    // The derived random variable f . self: same sample space, mapped values.
    template <typename F>
    auto map(F f) const {
        using B = std::decay_t<std::invoke_result_t<F, const A&>>;
        std::vector<typename SampleFamily<B>::Point> out;
        out.reserve(points_.size());
        for (const auto& [weight, value] : points_) {
            out.emplace_back(weight, f(value));
        }
        return SampleFamily<B>(std::move(out));
    }

    bool operator==(const SampleFamily& o) const { return points_ == o.points_; }

private:
    std::vector<Point> points_;
};

// result(b) = sum of d(a) over the preimage of b; zero-weight entries cannot
// arise since all summed weights are positive.
template <typename A, typename F>
auto pushforward(const Dist<A>& d, F f) {
    using B = std::decay_t<std::invoke_result_t<F, const A&>>;
    std::vector<std::pair<B, Rational>> entries;
    entries.reserve(d.entries().size());
    for (const auto& [value, weight] : d.entries()) {
        entries.emplace_back(f(value), weight);
    }
    return Dist<B>::from_weights(entries);
}

// The distribution p_S of the family, i.e. the pushforward of the sample
// space's distribution along the value function.
template <typename A>
Dist<A> distribution_of(const SampleFamily<A>& s) {
    std::vector<std::pair<A, Rational>> entries;
    entries.reserve(s.size());
    for (const auto& [weight, value] : s.points()) {
        entries.emplace_back(value, weight);
    }
    return Dist<A>::from_weights(entries);
}

// Conditions the family on obs(value) = b: keeps exactly the matching points
// and rescales their weights by the total kept mass.
template <typename A, typename Obs, typename B>
SampleFamily<A> condition(const SampleFamily<A>& s, Obs obs, const B& b) {
    std::vector<typename SampleFamily<A>::Point> kept;
    Rational total;
    for (const auto& [weight, value] : s.points()) {
        if (obs(value) == b) {
            kept.emplace_back(weight, value);
            total += weight;
        }
    }
    if (kept.empty()) {
        throw NullEventError("conditioning on an event of probability zero");
    }
    for (auto& [weight, value] : kept) {
        weight /= total;
    }
    return SampleFamily<A>(std::move(kept));
}

// Independence of the derived random variables f and g: the joint
// distribution must equal the product of the marginals on the full cross
// product of the marginal supports, so zero joint cells are checked too.
template <typename A, typename F, typename G>
bool independent(const SampleFamily<A>& s, F f, G g) {
    using B = std::decay_t<std::invoke_result_t<F, const A&>>;
    using C = std::decay_t<std::invoke_result_t<G, const A&>>;
    Dist<B> pf = distribution_of(s.map(f));
    Dist<C> pg = distribution_of(s.map(g));
    std::map<std::pair<B, C>, Rational> joint;
    for (const auto& [weight, value] : s.points()) {
        joint[{f(value), g(value)}] += weight;
    }
    for (const auto& [b, wb] : pf.entries()) {
        for (const auto& [c, wc] : pg.entries()) {
            auto it = joint.find({b, c});
            Rational actual = it == joint.end() ? Rational(0) : it->second;
            if (actual != wb * wc) return false;
        }
    }
    return true;
}

// f and g independent conditional on h: independence holds after
// conditioning on every value in the support of h.
template <typename A, typename F, typename G, typename H>
bool cond_independent(const SampleFamily<A>& s, F f, G g, H h) {
    auto ph = distribution_of(s.map(h));
    for (const auto& [c, weight] : ph.entries()) {
        if (!independent(condition(s, h, c), f, g)) return false;
    }
    return true;
}

// Splits point i into split(i) equal-weight copies. The collapsing map from
// new indices to old ones is a morphism of sample spaces: pushing the new
// weights along it recovers the original family.
template <typename A, typename Split>
SampleFamily<A> refine(const SampleFamily<A>& s, Split split) {
    std::vector<typename SampleFamily<A>::Point> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned long k = split(i);
        if (k == 0) {
            throw std::invalid_argument("refinement split count must be positive");
        }
        Rational piece = s.weight(i) / Rational(Integer(k));
        for (unsigned long j = 0; j < k; ++j) {
            out.emplace_back(piece, s.value(i));
        }
    }
    return SampleFamily<A>(std::move(out));
}

} // namespace pslab
