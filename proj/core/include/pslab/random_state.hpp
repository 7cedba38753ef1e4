#pragma once

#include "pslab/sample_family.hpp"
#include "pslab/state.hpp"

namespace pslab {

// A random state is a State-valued random variable.
using RandomState = SampleFamily<State>;

// Pointwise restriction; same sample space (weights, point count, order).
RandomState random_restrict(const RandomState& sigma, const VarSet& vars);

// True iff every sample point's state is V-total. Because all weights are
// strictly positive this coincides with "V-total with probability 1".
bool random_is_total(const RandomState& sigma, const VarSet& vars);

// The random integer obtained by looking up x at every point.
// Requires the random state to be {x}-total.
SampleFamily<Integer> project_int(const RandomState& sigma, const VarName& x);

// The pointwise partial order, defined only over a common sample space:
// families of equal length with equal weight sequences, point states
// related by state_leq. Returns false on any shape mismatch.
bool random_state_leq(const RandomState& a, const RandomState& b);

} // namespace pslab
