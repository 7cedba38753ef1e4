#include "pslab/speccheck.hpp"

#include <algorithm>
#include <sstream>

#include "pslab/literals.hpp"

namespace pslab {

std::string_view to_string(FailReason r) {
    switch (r) {
    case FailReason::precondition_undefined: return "precondition-undefined";
    case FailReason::precondition_false: return "precondition-false";
    case FailReason::safety_violation: return "safety-violation";
    case FailReason::postcondition_false: return "postcondition-false";
    case FailReason::postcondition_undefined: return "postcondition-undefined";
    case FailReason::nontermination: return "nontermination";
    case FailReason::tightness_violated: return "tightness-violated";
    }
    return "?";
}

std::string_view to_string(Verdict::Kind k) {
    switch (k) {
    case Verdict::Kind::holds: return "holds";
    case Verdict::Kind::fails: return "fails";
    case Verdict::Kind::unknown: return "unknown";
    }
    return "?";
}

Verdict Verdict::holds(std::string detail) {
    Verdict v;
    v.kind = Kind::holds;
    v.detail = std::move(detail);
    return v;
}

Verdict Verdict::fails(FailReason reason, std::string detail) {
    Verdict v;
    v.kind = Kind::fails;
    v.reason = reason;
    v.detail = std::move(detail);
    return v;
}

Verdict Verdict::unknown(Rational residual, std::string where) {
    Verdict v;
    v.kind = Kind::unknown;
    v.residual = std::move(residual);
    v.where = std::move(where);
    return v;
}

namespace {

std::optional<Verdict> check_precondition(const Spec& spec, const RandomState& sigma) {
    SatResult pre = spec.pre.eval(sigma);
    if (pre == SatResult::undefined) {
        return Verdict::fails(FailReason::precondition_undefined,
                              "precondition " + spec.pre.text + " is undefined on " +
                                  format_random_state(sigma) + " (footprint " +
                                  to_string(spec.pre.fv) + " not total)");
    }
    if (pre == SatResult::ff) {
        return Verdict::fails(FailReason::precondition_false,
                              "precondition " + spec.pre.text + " evaluates ff on " +
                                  format_random_state(sigma));
    }
    return std::nullopt;
}

std::optional<Verdict> check_safety(const Spec& spec, const RandomState& sigma,
                                    const CheckOptions& opts, Analyzer& analyzer) {
    if (!opts.enforce_safety) return std::nullopt;
    FaultFreedom ff = is_fault_free(spec.command, sigma, opts.mode, &analyzer);
    if (ff.verdict == Answer::no) {
        Verdict v = Verdict::fails(FailReason::safety_violation,
                                   "execution can fault from sample point " +
                                       std::to_string(*ff.witness_point) + " (state " +
                                       sigma.value(*ff.witness_point).str() + ")");
        v.witness_trace = ff.witness_trace;
        return v;
    }
    if (ff.verdict == Answer::unknown) {
        return Verdict::unknown(ff.unknown_residual, "safety (residual mass could hide faults)");
    }
    return std::nullopt;
}

// Framed-variable preservation: variables the command cannot modify are
// carried from the source state to the terminal state unchanged, pointwise
// along q. Violations indicate an internal bug, not a failed check.
void debug_check_frame_preservation(const RandomState& sigma, const RandomRun& run,
                                    const VarSet& frame_vars) {
    if (frame_vars.empty()) return;
    for (std::size_t i = 0; i < run.family.size(); ++i) {
        const auto& [source_index, terminal] = run.family.value(i);
        State expected = sigma.value(source_index).restrict_to(frame_vars);
        if (!(terminal.restrict_to(frame_vars) == expected)) {
            throw std::logic_error("modified-variable preservation violated for frame footprint " +
                                   to_string(frame_vars));
        }
    }
}

Verdict check_postcondition(const Spec& spec, const RandomState& sigma, const RandomRun& run,
                            const CheckOptions& opts) {
    debug_check_frame_preservation(sigma, run, opts.frame_vars);
    RandomState terminal_family = run.final_family();
    SatResult post = spec.post.eval(terminal_family);
    std::string terminal_literal = format_state_dist(run.terminal_distribution());
    if (post == SatResult::tt) {
        Verdict v = Verdict::holds("terminal random state satisfies " + spec.post.text);
        v.terminal = terminal_literal;
        return v;
    }
    if (post == SatResult::ff) {
        Verdict v = Verdict::fails(FailReason::postcondition_false,
                                   "postcondition " + spec.post.text +
                                       " evaluates ff on the terminal random state " +
                                       format_random_state(terminal_family));
        v.terminal = terminal_literal;
        return v;
    }
    Verdict v = Verdict::fails(FailReason::postcondition_undefined,
                               "postcondition " + spec.post.text +
                                   " is undefined on the terminal random state (footprint " +
                                   to_string(spec.post.fv) + " not total)");
    v.terminal = terminal_literal;
    return v;
}

void require_matching_analyzer(const Analyzer* analyzer, const Spec& spec,
                               const CheckOptions& opts) {
    if (analyzer == nullptr) return;
    bool same_mode = analyzer->mode().kind == opts.mode.kind &&
                     analyzer->mode().limit == opts.mode.limit;
    if (!same_mode || !equal(analyzer->command(), spec.command)) {
        throw std::logic_error("shared analyzer bound to a different command or mode");
    }
}

Verdict check_correctness(const Spec& spec, const RandomState& sigma, const CheckOptions& opts,
                          bool total_mode) {
    if (auto verdict = check_precondition(spec, sigma)) return *verdict;

    require_matching_analyzer(opts.analyzer, spec, opts);
    Analyzer local(spec.command, opts.mode);
    Analyzer& analyzer = opts.analyzer != nullptr ? *opts.analyzer : local;

    if (auto verdict = check_safety(spec, sigma, opts, analyzer)) return *verdict;

    Termination term = is_terminating(spec.command, sigma, opts.mode, &analyzer);
    if (term.verdict == Answer::unknown) {
        return Verdict::unknown(term.unknown_residual,
                                "termination (residual mass undecided within budget)");
    }
    if (term.verdict == Answer::no) {
        std::ostringstream detail;
        detail << "sample point " << *term.witness_point << " (state "
               << sigma.value(*term.witness_point).str() << ")";
        if (!term.fault_mass.is_zero()) detail << " faults with mass " << term.fault_mass.str();
        if (!term.divergence_mass.is_zero()) {
            detail << (term.fault_mass.is_zero() ? " diverges" : " and diverges") << " with mass "
                   << term.divergence_mass.str();
        }
        if (total_mode) {
            return Verdict::fails(FailReason::nontermination, detail.str());
        }
        // Partial correctness: the termination clause is vacuous; safety has
        // already been established (or deliberately waived).
        return Verdict::holds("not almost-surely terminating (" + detail.str() +
                              "); partial-correctness termination clause is vacuous");
    }

    auto run = run_random(spec.command, sigma, opts.mode, &analyzer);
    const RandomRun* rr = std::get_if<RandomRun>(&run);
    if (rr == nullptr) {
        throw std::logic_error("run_random failed after termination was established");
    }
    return check_postcondition(spec, sigma, *rr, opts);
}

} // namespace

Verdict check_partial(const Spec& spec, const RandomState& sigma, const CheckOptions& opts) {
    return check_correctness(spec, sigma, opts, /*total_mode=*/false);
}

Verdict check_total(const Spec& spec, const RandomState& sigma, const CheckOptions& opts) {
    return check_correctness(spec, sigma, opts, /*total_mode=*/true);
}

bool frame_side_condition(const Assertion& theta, const CommandPtr& command) {
    VarSet modified = mv(command);
    return std::none_of(theta.fv.begin(), theta.fv.end(),
                        [&modified](const VarName& v) { return modified.contains(v); });
}

Spec apply_frame(const Spec& spec, const Assertion& theta) {
    VarSet modified = mv(spec.command);
    VarSet offending;
    for (const VarName& v : theta.fv) {
        if (modified.contains(v)) offending.insert(v);
    }
    if (!offending.empty()) {
        throw FrameError("frame footprint intersects modified variables " + to_string(offending),
                         std::move(offending));
    }
    return Spec{make_sep(spec.pre, theta), spec.command, make_sep(spec.post, theta)};
}

namespace {

NamedTable state_table(std::string title, const Dist<State>& d) {
    NamedTable t;
    t.title = std::move(title);
    for (const auto& [state, prob] : d.entries()) {
        t.rows.emplace_back(state.str(), prob);
    }
    return t;
}

} // namespace

Verdict check_relative_tightness(const Spec& spec, const RandomState& sigma,
                                 const CheckOptions& opts) {
    if (auto verdict = check_precondition(spec, sigma)) return *verdict;

    require_matching_analyzer(opts.analyzer, spec, opts);
    Analyzer local(spec.command, opts.mode);
    Analyzer& analyzer = opts.analyzer != nullptr ? *opts.analyzer : local;

    auto run = run_random(spec.command, sigma, opts.mode, &analyzer);
    if (const auto* report = std::get_if<NonTerminationReport>(&run)) {
        Rational residual;
        for (const PointFailure& f : report->failures) {
            if (!f.fault_mass.is_zero() || (f.exact && !f.residual_mass.is_zero())) {
                std::ostringstream detail;
                detail << "sample point " << f.point << " (state " << sigma.value(f.point).str()
                       << ") has fault mass " << f.fault_mass.str() << " and divergence mass "
                       << f.residual_mass.str();
                return Verdict::fails(FailReason::nontermination, detail.str());
            }
            residual += sigma.weight(f.point) * f.residual_mass;
        }
        return Verdict::unknown(residual, "termination (residual mass undecided within budget)");
    }
    const RandomRun& rr = std::get<RandomRun>(run);

    using RunPoint = std::pair<std::size_t, State>;
    auto final_restricted = [&spec](const RunPoint& p) {
        return p.second.restrict_to(spec.post.fv);
    };
    auto source_state = [&sigma](const RunPoint& p) { return sigma.value(p.first); };
    auto source_restricted = [&spec, &sigma](const RunPoint& p) {
        return sigma.value(p.first).restrict_to(spec.pre.fv);
    };

    std::string terminal_literal = format_state_dist(rr.terminal_distribution());
    if (cond_independent(rr.family, final_restricted, source_state, source_restricted)) {
        Verdict v = Verdict::holds(
            "terminal state restricted to FV(post) is conditionally independent of the source "
            "state given its restriction to FV(pre)");
        v.terminal = terminal_literal;
        return v;
    }

    // Locate the first violating conditioning cell for the diagnostic tables.
    Verdict v = Verdict::fails(FailReason::tightness_violated,
                               "conditional independence fails: the terminal state restricted to "
                               "FV(post) depends on the source state beyond its restriction to "
                               "FV(pre)");
    v.terminal = terminal_literal;
    Dist<State> cells = distribution_of(rr.family.map(source_restricted));
    for (const auto& [cell, cell_prob] : cells.entries()) {
        auto conditioned = condition(rr.family, source_restricted, cell);
        if (independent(conditioned, final_restricted, source_state)) continue;
        std::string suffix = " | source restricted to FV(pre) = " + cell.str();
        v.tables.push_back(state_table("final restricted to FV(post)" + suffix,
                                       distribution_of(conditioned.map(final_restricted))));
        v.tables.push_back(
            state_table("source state" + suffix, distribution_of(conditioned.map(source_state))));
        NamedTable joint;
        joint.title = "joint (final restricted, source)" + suffix;
        Dist<std::pair<State, State>> joint_dist =
            distribution_of(conditioned.map([&](const RunPoint& p) {
                return std::make_pair(final_restricted(p), source_state(p));
            }));
        for (const auto& [pair, prob] : joint_dist.entries()) {
            joint.rows.emplace_back(pair.first.str() + " , " + pair.second.str(), prob);
        }
        v.tables.push_back(std::move(joint));
        break;
    }
    return v;
}

std::vector<State> enumerate_space_states(const SearchSpace& space) {
    std::vector<State> states;
    states.emplace_back();
    for (const VarName& var : space.vars) {
        std::vector<State> extended;
        extended.reserve(states.size() * (space.values.size() + 1));
        for (const State& s : states) {
            extended.push_back(s); // variable left unbound
            for (const Integer& value : space.values) {
                extended.push_back(s.update(var, value));
            }
        }
        states = std::move(extended);
    }
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end(),
                             [](const State& a, const State& b) { return a == b; }),
                 states.end());
    return states;
}

namespace {

// Compositions of `denominator` into exactly k positive parts, lexicographic.
void weight_compositions(unsigned long denominator, std::size_t k,
                         std::vector<unsigned long>& prefix,
                         std::vector<std::vector<unsigned long>>& out) {
    if (k == 1) {
        if (denominator >= 1) {
            prefix.push_back(denominator);
            out.push_back(prefix);
            prefix.pop_back();
        }
        return;
    }
    for (unsigned long first = 1; first + (k - 1) <= denominator; ++first) {
        prefix.push_back(first);
        weight_compositions(denominator - first, k - 1, prefix, out);
        prefix.pop_back();
    }
}

template <typename Fn>
void for_each_candidate(const SearchSpace& space, Fn fn) {
    std::vector<State> states = enumerate_space_states(space);
    const Integer denom(static_cast<long>(space.weight_denominator));
    for (std::size_t k = 1; k <= space.max_points && k <= states.size(); ++k) {
        if (space.weight_denominator < k) break; // no k positive parts available
        std::vector<std::vector<unsigned long>> weights;
        std::vector<unsigned long> prefix;
        weight_compositions(space.weight_denominator, k, prefix, weights);

        // Strictly increasing index tuples, lexicographic.
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        for (;;) {
            for (const auto& comp : weights) {
                std::vector<RandomState::Point> points;
                points.reserve(k);
                for (std::size_t i = 0; i < k; ++i) {
                    points.emplace_back(Rational(Integer(static_cast<long>(comp[i])), denom),
                                        states[pick[i]]);
                }
                if (!fn(RandomState(std::move(points)))) return;
            }
            // next combination
            bool advanced = false;
            std::size_t i = k;
            while (i-- > 0) {
                if (pick[i] != i + states.size() - k) {
                    ++pick[i];
                    for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
}

} // namespace

std::vector<RandomState> enumerate_space_candidates(const SearchSpace& space) {
    std::vector<RandomState> out;
    for_each_candidate(space, [&out](RandomState candidate) {
        out.push_back(std::move(candidate));
        return true;
    });
    return out;
}

SearchOutcome search_counterexample(const Spec& spec, const SearchSpace& space,
                                    const CheckOptions& opts, bool total_mode) {
    SearchOutcome outcome;
    Analyzer shared(spec.command, opts.mode);
    CheckOptions local = opts;
    if (local.analyzer == nullptr) local.analyzer = &shared;

    for_each_candidate(space, [&](RandomState candidate) {
        ++outcome.enumerated;
        if (spec.pre.eval(candidate) != SatResult::tt) return true;
        ++outcome.eligible;
        Verdict v = total_mode ? check_total(spec, candidate, local)
                               : check_partial(spec, candidate, local);
        if (v.is_fails()) {
            outcome.witness = candidate;
            outcome.verdict = std::move(v);
            return false;
        }
        return true;
    });
    return outcome;
}

} // namespace pslab
