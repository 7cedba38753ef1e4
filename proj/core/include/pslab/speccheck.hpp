#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pslab/assertions.hpp"
#include "pslab/semantics.hpp"

namespace pslab {

// A specification {pre} command {post}.
struct Spec {
    Assertion pre;
    CommandPtr command;
    Assertion post;
};

enum class FailReason {
    precondition_undefined,
    precondition_false,
    safety_violation,
    postcondition_false,
    postcondition_undefined,
    nontermination,
    tightness_violated,
};

std::string_view to_string(FailReason r);

struct NamedTable {
    std::string title;
    std::vector<std::pair<std::string, Rational>> rows;
};

struct Verdict {
    enum class Kind { holds, fails, unknown };
    Kind kind = Kind::holds;
    std::optional<FailReason> reason;      // set when kind == fails
    std::string detail;                    // human-readable summary / witness
    std::vector<std::string> witness_trace; // faulting path prefix, when any
    Rational residual;                     // set when kind == unknown
    std::string where;                     // which stage is unknown
    std::optional<std::string> terminal;   // terminal distribution literal
    std::vector<NamedTable> tables;        // distribution tables for diagnostics

    bool is_holds() const { return kind == Kind::holds; }
    bool is_fails() const { return kind == Kind::fails; }
    bool is_unknown() const { return kind == Kind::unknown; }

    static Verdict holds(std::string detail = "");
    static Verdict fails(FailReason reason, std::string detail);
    static Verdict unknown(Rational residual, std::string where);
};

std::string_view to_string(Verdict::Kind k);

struct CheckOptions {
    bool enforce_safety = true;             // the safety guarantee of partial correctness
    AnalysisMode mode = AnalysisMode::absorb(10000);
    VarSet frame_vars;                      // nonempty: check the framed-variable
                                            // preservation equality as a debug assertion
    Analyzer* analyzer = nullptr;           // optional shared per-command cache
};

// Partial correctness on a concrete witness state: the precondition must
// evaluate tt; execution must be fault-free (unless safety is disabled);
// and if execution terminates almost surely, the terminal random state must
// satisfy the postcondition. Exact nontermination makes the termination
// clause vacuous.
Verdict check_partial(const Spec& spec, const RandomState& sigma, const CheckOptions& opts = {});

// Total correctness: as above but almost-sure termination is mandatory.
Verdict check_total(const Spec& spec, const RandomState& sigma, const CheckOptions& opts = {});

// FV(theta) and MV(command) must be disjoint.
bool frame_side_condition(const Assertion& theta, const CommandPtr& command);

struct FrameError : Error {
    FrameError(std::string message, VarSet offending_vars)
        : Error(std::move(message)), offending(std::move(offending_vars)) {}
    VarSet offending;
};

// {pre * theta} command {post * theta}; throws FrameError naming the
// offending variables when the side condition fails.
Spec apply_frame(const Spec& spec, const Assertion& theta);

// Relative tightness on a witness: the terminal state restricted to the
// postcondition footprint must be conditionally independent of the source
// state given the source state's restriction to the precondition footprint,
// all three as random variables over the run's sample space.
Verdict check_relative_tightness(const Spec& spec, const RandomState& sigma,
                                 const CheckOptions& opts = {});

// Candidate random states: families of up to max_points distinct partial
// states over `vars` with values drawn from `values`, weighted by positive
// multiples of 1/weight_denominator summing to 1.
struct SearchSpace {
    std::vector<VarName> vars;
    std::vector<Integer> values;
    unsigned long weight_denominator = 2;
    std::size_t max_points = 2;
};

struct SearchOutcome {
    std::optional<RandomState> witness; // first candidate that Fails
    Verdict verdict;                    // its verdict when found
    std::size_t eligible = 0;           // candidates satisfying the precondition
    std::size_t enumerated = 0;         // all candidates enumerated
};

// Enumerates candidates in lexicographic (point count, states, weights)
// order, checks each one satisfying the precondition, and returns the first
// failure. Unknown verdicts are skipped, not reported as failures.
SearchOutcome search_counterexample(const Spec& spec, const SearchSpace& space,
                                    const CheckOptions& opts = {}, bool total_mode = false);

// All candidate states of a search space in canonical order (exposed for
// the exhaustive premise checks in tests).
std::vector<State> enumerate_space_states(const SearchSpace& space);
std::vector<RandomState> enumerate_space_candidates(const SearchSpace& space);

} // namespace pslab
