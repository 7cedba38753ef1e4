#pragma once

#include <functional>
#include <string>

#include "pslab/ast.hpp"
#include "pslab/random_state.hpp"

namespace pslab {

// Three-valued satisfaction. `undefined` occurs exactly when the random
// state is not total on the assertion's footprint variables.
enum class SatResult { tt, ff, undefined };

std::string_view to_string(SatResult r);

// A semantic assertion: a footprint variable set together with a pure
// evaluator on random states. The formers below maintain the contracts
//   - definedness <=> footprint-totality,
//   - monotonicity of defined verdicts under the pointwise state order,
//   - invariance under sample-space morphisms (refinement),
// which downstream checks rely on.
struct Assertion {
    VarSet fv;
    std::function<SatResult(const RandomState&)> eval;
    std::string text;
};

// [B]: B holds with probability 1. With no zero-weight sample points this
// is satisfaction at every point. `top` is the special case [true].
Assertion make_event(BoolExprPtr b);
Assertion make_top();

// E ~ D: conditional on each distribution value d that D takes, the
// distribution of E is exactly d.
Assertion make_sim(IntExprPtr e, DistExprPtr d);

// Det(E): E takes a single value across the whole family.
Assertion make_det(IntExprPtr e);

// Classical connectives. Undefined dominates: each is undefined exactly on
// random states that are not total on the union footprint, even when one
// operand alone could be decided.
Assertion make_not(Assertion a);
Assertion make_and(Assertion lhs, Assertion rhs);
Assertion make_or(Assertion lhs, Assertion rhs);
Assertion make_implies(Assertion lhs, Assertion rhs);

// cond(E) P: P holds after conditioning on every value E takes.
Assertion make_cond(IntExprPtr e, Assertion body);

// P * Q: both hold and the restrictions of the random state to the two
// footprints are independent. Footprints may overlap; independence then
// forces the shared variables to be deterministic.
Assertion make_sep(Assertion lhs, Assertion rhs);

} // namespace pslab
