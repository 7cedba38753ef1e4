#pragma once

#include <string>
#include <variant>

#include "pslab/ast.hpp"
#include "pslab/dist.hpp"
#include "pslab/state.hpp"

namespace pslab {

// An expression evaluates to `Undefined` exactly when one of its variables
// is outside the state's domain. Arithmetic failures on fully defined
// expressions (division or modulus by zero, an empty uniform range) are
// `EvalFault`s; the transition system routes both outcomes to the fault node.
struct Undefined {};
struct EvalFault {
    std::string reason;
};

template <typename T>
using Eval = std::variant<T, Undefined, EvalFault>;

template <typename T>
bool is_value(const Eval<T>& e) {
    return e.index() == 0;
}
template <typename T>
bool is_undefined(const Eval<T>& e) {
    return e.index() == 1;
}
template <typename T>
bool is_fault(const Eval<T>& e) {
    return e.index() == 2;
}
template <typename T>
const T& value_of(const Eval<T>& e) {
    return std::get<0>(e);
}
template <typename T>
const std::string& fault_reason(const Eval<T>& e) {
    return std::get<EvalFault>(e).reason;
}

// Integer division rounds toward negative infinity; x mod m carries the
// sign of m (m != 0).
Eval<Integer> eval_int(const IntExprPtr& e, const State& sigma);
Eval<bool> eval_bool(const BoolExprPtr& b, const State& sigma);
Eval<Dist<Integer>> eval_dist(const DistExprPtr& d, const State& sigma);

// The uniform distribution on the integer interval [lo, hi]; requires lo <= hi.
Dist<Integer> uniform_interval(const Integer& lo, const Integer& hi);

} // namespace pslab
