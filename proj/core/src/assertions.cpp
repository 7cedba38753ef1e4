#include "pslab/assertions.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "pslab/eval.hpp"

namespace pslab {

std::string_view to_string(SatResult r) {
    switch (r) {
    case SatResult::tt: return "tt";
    case SatResult::ff: return "ff";
    case SatResult::undefined: return "undefined";
    }
    return "?";
}

namespace {

VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

// Evaluates an integer expression at every point of an FV-total random
// state. Returns nothing if some point faults arithmetically; a faulting
// expression cannot witness any of the almost-sure properties below, so
// callers map that case to ff.
std::optional<SampleFamily<Integer>> int_family(const IntExprPtr& e, const RandomState& sigma) {
    std::vector<SampleFamily<Integer>::Point> points;
    points.reserve(sigma.size());
    for (const auto& [weight, state] : sigma.points()) {
        Eval<Integer> v = eval_int(e, state);
        if (!is_value(v)) return std::nullopt;
        points.emplace_back(weight, value_of(v));
    }
    return SampleFamily<Integer>(std::move(points));
}

} // namespace

Assertion make_event(BoolExprPtr b) {
    VarSet fv = vars_of(b);
    std::string text = "[" + to_source(b) + "]";
    auto eval = [b, fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        for (const auto& [weight, state] : sigma.points()) {
            Eval<bool> r = eval_bool(b, state);
            if (!is_value(r) || !value_of(r)) return SatResult::ff;
        }
        return SatResult::tt;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

Assertion make_top() {
    Assertion top = make_event(bool_lit(true));
    top.text = "top";
    return top;
}

Assertion make_sim(IntExprPtr e, DistExprPtr d) {
    VarSet fv = set_union(vars_of(e), vars_of(d));
    std::string text = to_source(e) + " ~ " + to_source(d);
    auto eval = [e, d, fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        // The distribution-valued random variable of D, point by point.
        std::vector<Dist<Integer>> dists;
        dists.reserve(sigma.size());
        for (const auto& [weight, state] : sigma.points()) {
            Eval<Dist<Integer>> r = eval_dist(d, state);
            if (!is_value(r)) return SatResult::ff;
            dists.push_back(value_of(r));
        }
        std::optional<SampleFamily<Integer>> values = int_family(e, sigma);
        if (!values.has_value()) return SatResult::ff;

        // Conditioned on each distribution value d0 in the support, the
        // distribution of E must equal d0 exactly.
        std::map<Dist<Integer>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            groups[dists[i]].push_back(i);
        }
        for (const auto& [d0, members] : groups) {
            Rational total;
            for (std::size_t i : members) total += sigma.weight(i);
            std::vector<std::pair<Integer, Rational>> conditioned;
            conditioned.reserve(members.size());
            for (std::size_t i : members) {
                conditioned.emplace_back(values->value(i), sigma.weight(i) / total);
            }
            if (!(Dist<Integer>::from_weights(conditioned) == d0)) return SatResult::ff;
        }
        return SatResult::tt;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

Assertion make_det(IntExprPtr e) {
    VarSet fv = vars_of(e);
    std::string text = "det(" + to_source(e) + ")";
    auto eval = [e, fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        std::optional<SampleFamily<Integer>> values = int_family(e, sigma);
        if (!values.has_value()) return SatResult::ff;
        for (std::size_t i = 1; i < values->size(); ++i) {
            if (values->value(i) != values->value(0)) return SatResult::ff;
        }
        return SatResult::tt;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

namespace {

SatResult expect_defined(SatResult r) {
    if (r == SatResult::undefined) {
        throw std::logic_error("sub-assertion undefined on a footprint-total random state");
    }
    return r;
}

} // namespace

Assertion make_not(Assertion a) {
    VarSet fv = a.fv;
    std::string text = "!" + a.text;
    auto eval = [a = std::move(a)](const RandomState& sigma) -> SatResult {
        SatResult r = a.eval(sigma);
        if (r == SatResult::undefined) return SatResult::undefined;
        return r == SatResult::tt ? SatResult::ff : SatResult::tt;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

Assertion make_and(Assertion lhs, Assertion rhs) {
    VarSet fv = set_union(lhs.fv, rhs.fv);
    std::string text = "(" + lhs.text + " && " + rhs.text + ")";
    auto eval = [lhs = std::move(lhs), rhs = std::move(rhs), fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        bool a = expect_defined(lhs.eval(sigma)) == SatResult::tt;
        bool b = expect_defined(rhs.eval(sigma)) == SatResult::tt;
        return a && b ? SatResult::tt : SatResult::ff;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

Assertion make_or(Assertion lhs, Assertion rhs) {
    VarSet fv = set_union(lhs.fv, rhs.fv);
    std::string text = "(" + lhs.text + " || " + rhs.text + ")";
    auto eval = [lhs = std::move(lhs), rhs = std::move(rhs), fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        bool a = expect_defined(lhs.eval(sigma)) == SatResult::tt;
        bool b = expect_defined(rhs.eval(sigma)) == SatResult::tt;
        return a || b ? SatResult::tt : SatResult::ff;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

Assertion make_implies(Assertion lhs, Assertion rhs) {
    VarSet fv = set_union(lhs.fv, rhs.fv);
    std::string text = "(" + lhs.text + " -> " + rhs.text + ")";
    auto eval = [lhs = std::move(lhs), rhs = std::move(rhs), fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        bool a = expect_defined(lhs.eval(sigma)) == SatResult::tt;
        bool b = expect_defined(rhs.eval(sigma)) == SatResult::tt;
        return !a || b ? SatResult::tt : SatResult::ff;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

Assertion make_cond(IntExprPtr e, Assertion body) {
    VarSet fv = set_union(vars_of(e), body.fv);
    std::string text = "cond(" + to_source(e) + ") " + body.text;
    auto eval = [e, body = std::move(body), fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        std::optional<SampleFamily<Integer>> values = int_family(e, sigma);
        if (!values.has_value()) return SatResult::ff;
        Dist<Integer> support = distribution_of(*values);
        for (const auto& [n, weight] : support.entries()) {
            std::vector<RandomState::Point> kept;
            Rational total;
            for (std::size_t i = 0; i < sigma.size(); ++i) {
                if (values->value(i) == n) {
                    kept.emplace_back(sigma.weight(i), sigma.value(i));
                    total += sigma.weight(i);
                }
            }
            for (auto& [w, s] : kept) w /= total;
            RandomState cell{std::move(kept)};
            if (expect_defined(body.eval(cell)) == SatResult::ff) return SatResult::ff;
        }
        return SatResult::tt;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

Assertion make_sep(Assertion lhs, Assertion rhs) {
    VarSet fv = set_union(lhs.fv, rhs.fv);
    std::string text = "(" + lhs.text + " * " + rhs.text + ")";
    auto eval = [lhs = std::move(lhs), rhs = std::move(rhs), fv](const RandomState& sigma) -> SatResult {
        if (!random_is_total(sigma, fv)) return SatResult::undefined;
        if (expect_defined(lhs.eval(sigma)) != SatResult::tt) return SatResult::ff;
        if (expect_defined(rhs.eval(sigma)) != SatResult::tt) return SatResult::ff;
        bool indep = independent(
            sigma, [&lhs](const State& s) { return s.restrict_to(lhs.fv); },
            [&rhs](const State& s) { return s.restrict_to(rhs.fv); });
        return indep ? SatResult::tt : SatResult::ff;
    };
    return Assertion{std::move(fv), std::move(eval), std::move(text)};
}

} // namespace pslab
