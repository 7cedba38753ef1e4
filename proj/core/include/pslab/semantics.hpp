#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pslab/ast.hpp"
#include "pslab/dist.hpp"
#include "pslab/random_state.hpp"
#include "pslab/state.hpp"

namespace pslab {

// ---- configurations and single steps -------------------------------------

struct ConfigNT {
    CommandPtr command;
    State state;
};
struct ConfigTerm {
    State state;
};
struct ConfigFault {};

// Terminal and fault configurations have no outgoing transitions.
using Config = std::variant<ConfigNT, ConfigTerm, ConfigFault>;

struct SampleLabel {
    Integer value;
    Dist<Integer> dist; // value is in the support of dist
};

struct StepBranch {
    std::optional<SampleLabel> label; // empty for deterministic transitions
    Rational prob;                    // 1 for deterministic, d(n) for sampling
    Config next;
};

// All outgoing transitions of a nonterminal configuration. Deterministic
// steps yield a single probability-1 branch; sampling yields one branch per
// support element, probabilities summing to 1. Calling this on a terminal
// or fault configuration is a caller bug.
std::vector<StepBranch> step(const Config& cfg);

// ---- whole-execution analysis ------------------------------------------

struct ExplorationResult {
    std::map<State, Rational> terminal; // mass absorbed per terminal state
    Rational fault_mass;
    // Bounded mode: mass still on nonterminal configurations when the
    // budget ran out. Absorption mode: the exact divergence probability.
    Rational residual_mass;
    bool exact = false;
    bool cap_exceeded = false;
    std::string note;

    Rational terminal_total() const;
};

struct AnalysisMode {
    enum class Kind { bounded, absorb };
    Kind kind = Kind::absorb;
    long limit = 10000;

    static AnalysisMode bounded(long budget) { return {Kind::bounded, budget}; }
    static AnalysisMode absorb(long node_cap) { return {Kind::absorb, node_cap}; }
};

using TraceFn = std::function<void(const ConfigNT& from, const StepBranch& branch)>;

// Layer-by-layer exhaustive mass propagation for up to `budget` transition
// layers. Terminal and fault masses are exact lower bounds of the true
// values; residual_mass bounds divergence plus unexplored termination.
// When residual_mass reaches 0 the result is exact.
ExplorationResult explore(const CommandPtr& c, const State& sigma, long budget,
                          const TraceFn& trace = {});

// Enumerates the reachable configuration graph (up to node_cap nodes) and
// solves the linear absorption system exactly over rationals, so terminal,
// fault and divergence masses are the true limits. Falls back to bounded
// exploration (with the cap as budget) when the graph exceeds the cap; the
// fallback is flagged via cap_exceeded and note.
ExplorationResult absorption_solve(const CommandPtr& c, const State& sigma, long node_cap,
                                   const TraceFn& trace = {});

ExplorationResult analyze(const CommandPtr& c, const State& sigma, const AnalysisMode& mode,
                          const TraceFn& trace = {});

// Caches per-state analysis results for a fixed command and mode.
class Analyzer {
public:
    Analyzer(CommandPtr command, AnalysisMode mode)
        : command_(std::move(command)), mode_(mode) {}

    const ExplorationResult& result_for(const State& sigma);
    const CommandPtr& command() const { return command_; }
    const AnalysisMode& mode() const { return mode_; }

private:
    CommandPtr command_;
    AnalysisMode mode_;
    std::map<State, ExplorationResult> cache_;
};

// ---- random runs -----------------------------------------------------------

// The terminating execution of C from a random state: the sample space is
// the set of (source point, final state) pairs, the weight of a point is
// the source weight times the exact mass with which that final state is
// reached, and q (the first projection) is a morphism of sample spaces back
// onto the source family.
struct RandomRun {
    SampleFamily<std::pair<std::size_t, State>> family;

    std::size_t source_of(std::size_t i) const { return family.value(i).first; }
    SampleFamily<State> final_family() const;
    Dist<State> terminal_distribution() const;
};

struct PointFailure {
    std::size_t point;
    Rational fault_mass;
    Rational residual_mass;
    bool exact;
};

struct NonTerminationReport {
    std::vector<PointFailure> failures; // points with fault or residual mass
};

std::variant<RandomRun, NonTerminationReport> run_random(const CommandPtr& c,
                                                         const RandomState& sigma,
                                                         const AnalysisMode& mode,
                                                         Analyzer* analyzer = nullptr);

// ---- fault-freeness and termination ---------------------------------------

enum class Answer { yes, no, unknown };
std::string_view to_string(Answer a);

struct FaultFreedom {
    Answer verdict;
    std::optional<std::size_t> witness_point; // valid when verdict == no
    std::vector<std::string> witness_trace;   // faulting path prefix
    Rational unknown_residual;                // valid when verdict == unknown
};

FaultFreedom is_fault_free(const CommandPtr& c, const RandomState& sigma,
                           const AnalysisMode& mode, Analyzer* analyzer = nullptr);

struct Termination {
    Answer verdict;
    std::optional<std::size_t> witness_point; // valid when verdict == no
    Rational fault_mass;                      // definite fault mass at the witness
    Rational divergence_mass;                 // definite divergence at the witness
    Rational unknown_residual;                // valid when verdict == unknown
};

Termination is_terminating(const CommandPtr& c, const RandomState& sigma,
                           const AnalysisMode& mode, Analyzer* analyzer = nullptr);

// Shortest deterministic-order path from (c, sigma) to the fault node, as
// printable transition lines; empty when no fault is found within max_depth.
std::vector<std::string> fault_trace(const CommandPtr& c, const State& sigma, long max_depth);

std::string format_config(const Config& cfg);

} // namespace pslab
