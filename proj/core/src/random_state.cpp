#include "pslab/random_state.hpp"

namespace pslab {

RandomState random_restrict(const RandomState& sigma, const VarSet& vars) {
    return sigma.map([&vars](const State& s) { return s.restrict_to(vars); });
}

bool random_is_total(const RandomState& sigma, const VarSet& vars) {
    for (const auto& [weight, state] : sigma.points()) {
        if (!state.is_total(vars)) return false;
    }
    return true;
}

SampleFamily<Integer> project_int(const RandomState& sigma, const VarName& x) {
    std::vector<SampleFamily<Integer>::Point> out;
    out.reserve(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const Integer* value = sigma.value(i).lookup(x);
        if (value == nullptr) {
            throw NotTotalError("random state is not {" + x.str() + "}-total at sample point " +
                                std::to_string(i));
        }
        out.emplace_back(sigma.weight(i), *value);
    }
    return SampleFamily<Integer>(std::move(out));
}

bool random_state_leq(const RandomState& a, const RandomState& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.weight(i) != b.weight(i)) return false;
        if (!state_leq(a.value(i), b.value(i))) return false;
    }
    return true;
}

} // namespace pslab
