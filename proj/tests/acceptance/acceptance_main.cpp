// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 only if all pass.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "cli.hpp"
#include "pslab/assert_syntax.hpp"
#include "pslab/literals.hpp"
#include "pslab/parser.hpp"
#include "pslab/speccheck.hpp"
#include "support/gen.hpp"

using namespace pslab;
using testgen::Rng;

namespace {

namespace fs = std::filesystem;

struct Check {
    std::vector<std::string> failures;
    long checks = 0;

    void require(bool ok, const std::string& message) {
        ++checks;
        if (!ok) failures.push_back(message);
    }
};

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = pslab::cli::dispatch(std::move(args), out, err);
    return CliResult{code, out.str() + err.str()};
}

class Workspace {
public:
    Workspace() {
        root_ = fs::temp_directory_path() / "pslab-acceptance";
        fs::create_directories(root_);
    }
    std::string write(const std::string& name, const std::string& content) {
        fs::path p = root_ / name;
        std::ofstream f(p);
        f << content;
        return p.string();
    }

private:
    fs::path root_;
};

RandomState rst(const std::string& literal) { return parse_random_state_literal(literal); }

// ---- shared randomized corpus ---------------------------------------------
//
// Each trial carries a loop-free program, a precondition that pins every
// program variable (so eligible candidates cannot fault), a postcondition
// verified to hold on every eligible candidate of the trial's search space,
// a frame assertion over a fresh variable, and the set of eligible
// candidates itself.

struct Trial {
    Spec spec;
    SearchSpace space;
    Assertion frame;
    std::vector<RandomState> eligible;      // candidates satisfying the precondition
    std::vector<RandomState> frame_states;  // witnesses satisfying the frame assertion
};

Assertion range_event(const VarName& v, long max_value) {
    BoolExprPtr b = bool_cmp(CmpOp::eq, int_var(v), int_lit(0L));
    for (long n = 1; n <= max_value; ++n) {
        b = bool_bin(BoolBinOp::disj, b, bool_cmp(CmpOp::eq, int_var(v), int_lit(n)));
    }
    return make_event(b);
}

std::vector<Trial> build_corpus(std::size_t target_trials) {
    Rng rng(20250808);
    std::vector<Trial> corpus;
    std::vector<VarName> pool = testgen::var_pool();

    while (corpus.size() < target_trials) {
        bool three_vars = rng.chance(0.3);
        std::vector<VarName> vars(pool.begin(), pool.begin() + (three_vars ? 3 : 2));
        long space_value_max = three_vars ? 1 : 2;

        Trial trial{Spec{make_top(), testgen::random_loopfree_program(rng, vars), make_top()},
                    SearchSpace{}, make_top(), {}, {}};

        // precondition: every program variable pinned to the space's range,
        // occasionally via a separating conjunction
        Assertion pre = range_event(vars[0], space_value_max);
        for (std::size_t i = 1; i < vars.size(); ++i) {
            Assertion next = range_event(vars[i], space_value_max);
            pre = (i == 1 && rng.chance(0.4)) ? make_sep(pre, next) : make_and(pre, next);
        }
        trial.spec.pre = pre;

        trial.space.vars = vars;
        for (long v = 0; v <= space_value_max; ++v) trial.space.values.emplace_back(v);
        trial.space.max_points = 2;
        trial.space.weight_denominator = 2;

        for (RandomState& candidate : enumerate_space_candidates(trial.space)) {
            if (trial.spec.pre.eval(candidate) == SatResult::tt) {
                trial.eligible.push_back(std::move(candidate));
            }
        }
        if (trial.eligible.empty()) continue;

        // pick the first candidate postcondition that holds on every
        // eligible candidate; `top` always does
        Analyzer analyzer(trial.spec.command, AnalysisMode::absorb(10000));
        CheckOptions opts;
        opts.analyzer = &analyzer;
        std::vector<Assertion> posts;
        posts.push_back(make_event(testgen::random_bool_expr(rng, vars, 1)));
        posts.push_back(make_det(int_var(rng.pick(vars))));
        posts.push_back(make_event(testgen::random_bool_expr(rng, vars, 2)));
        posts.push_back(make_top());
        for (Assertion& post : posts) {
            trial.spec.post = post;
            bool all_hold = true;
            for (const RandomState& candidate : trial.eligible) {
                if (!check_partial(trial.spec, candidate, opts).is_holds()) {
                    all_hold = false;
                    break;
                }
            }
            if (all_hold) break;
        }

        // frame over a fresh variable; the side condition holds trivially
        VarName fresh("W");
        trial.frame = rng.chance(0.5) ? range_event(fresh, 1) : make_det(int_var(fresh));
        for (const char* lit : {"1 {W:0}", "1 {W:1}", "1/2 {W:0} + 1/2 {W:1}"}) {
            RandomState candidate = rst(lit);
            if (trial.frame.eval(candidate) == SatResult::tt) {
                trial.frame_states.push_back(std::move(candidate));
            }
        }

        corpus.push_back(std::move(trial));
    }
    return corpus;
}

const std::vector<Trial>& corpus() {
    static std::vector<Trial> instance = build_corpus(220);
    return instance;
}

RandomState product_state(const RandomState& a, const RandomState& b) {
    std::vector<RandomState::Point> points;
    points.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            points.emplace_back(a.weight(i) * b.weight(j), mask(a.value(i), b.value(j)));
        }
    }
    return RandomState(std::move(points));
}

// ---- criteria ---------------------------------------------------------------

void criterion_safety_counterexample(Check& check) {
    Workspace ws;
    std::string spec = ws.write("safety.spec",
                                "pre: top\n"
                                "program: X := X mod 2\n"
                                "post: [X = 0 || X = 1]\n"
                                "input: 1 {}\n");
    CliResult fails = cli({"check", spec});
    check.require(fails.exit_code == 1, "expected exit 1, got " + std::to_string(fails.exit_code));
    check.require(fails.out.find("reason: safety-violation") != std::string::npos,
                  "expected a safety-violation reason, got:\n" + fails.out);
    CliResult holds = cli({"check", spec, "--unsafe"});
    check.require(holds.exit_code == 0,
                  "expected exit 0 with --unsafe, got " + std::to_string(holds.exit_code));
    check.require(holds.out.find("verdict: holds") != std::string::npos,
                  "expected holds with --unsafe, got:\n" + holds.out);
}

void criterion_tightness_failure(Check& check) {
    Workspace ws;
    std::string spec = ws.write("tightness.spec",
                                "pre: top\n"
                                "program: X := X mod 2\n"
                                "post: [X = 0 || X = 1]\n"
                                "input: 1/2 {X:0} + 1/2 {X:1}\n");
    CliResult r = cli({"tightness", spec, "--unsafe"});
    check.require(r.exit_code == 1, "expected exit 1, got " + std::to_string(r.exit_code));
    check.require(r.out.find("reason: tightness-violated") != std::string::npos,
                  "expected a tightness failure, got:\n" + r.out);
    check.require(r.out.find("terminal: 1/2 {X:0} + 1/2 {X:1}") != std::string::npos,
                  "terminal distribution mismatch, got:\n" + r.out);
}

void criterion_frame_violation(Check& check) {
    Workspace ws;
    std::string spec = ws.write("frame.spec",
                                "pre: top\n"
                                "program: X := X mod 2\n"
                                "post: [X = 0 || X = 1]\n"
                                "frame: [Y = 0 || Y = 1]\n"
                                "input: 1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}\n");
    CliResult direct = cli({"check", spec, "--unsafe"});
    check.require(direct.exit_code == 1,
                  "expected exit 1 on the framed spec, got " + std::to_string(direct.exit_code));
    check.require(direct.out.find("reason: postcondition-false") != std::string::npos,
                  "expected a postcondition failure, got:\n" + direct.out);
    check.require(direct.out.find("terminal: 1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}") != std::string::npos,
                  "expected the correlated terminal distribution as witness, got:\n" + direct.out);

    CliResult search = cli({"search", spec, "--unsafe", "--vars", "X,Y", "--values", "0..1",
                            "--max-points", "2", "--denom", "2"});
    check.require(search.exit_code == 1,
                  "expected search to find a witness, exit " + std::to_string(search.exit_code));
    check.require(search.out.find("witness: 1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}") != std::string::npos,
                  "search found a different witness:\n" + search.out);
}

void criterion_frame_soundness(Check& check) {
    for (const Trial& trial : corpus()) {
        Spec framed = apply_frame(trial.spec, trial.frame);
        Analyzer analyzer(framed.command, AnalysisMode::absorb(10000));
        CheckOptions opts;
        opts.analyzer = &analyzer;
        opts.frame_vars = trial.frame.fv;
        for (const RandomState& sigma1 : trial.eligible) {
            for (const RandomState& sigma2 : trial.frame_states) {
                RandomState product = product_state(sigma1, sigma2);
                if (framed.pre.eval(product) != SatResult::tt) {
                    check.require(false, "product witness does not satisfy the framed precondition");
                    continue;
                }
                Verdict v = check_partial(framed, product, opts);
                check.require(v.is_holds(),
                              "framed spec failed on " + format_random_state(product) + ": " +
                                  v.detail);
            }
        }
    }
}

void criterion_tightness_corpus(Check& check) {
    for (const Trial& trial : corpus()) {
        Analyzer analyzer(trial.spec.command, AnalysisMode::absorb(10000));
        CheckOptions opts;
        opts.analyzer = &analyzer;
        for (const RandomState& sigma : trial.eligible) {
            Verdict v = check_relative_tightness(trial.spec, sigma, opts);
            check.require(v.is_holds(), "tightness violated on " + format_random_state(sigma) +
                                            " for post " + trial.spec.post.text + ": " + v.detail);
        }
    }
}

void criterion_probability_laws(Check& check) {
    Rng rng(424242);
    using testgen::Tuple;
    using testgen::TupleFn;

    int composition_premises = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn f(rng, 3), g(rng, 3);
        if (independent(s, f, g)) {
            ++composition_premises;
            std::array<long, 3> h{rng.range(0, 1), rng.range(0, 1), rng.range(0, 1)};
            auto hg = [&](const Tuple& t) { return h[static_cast<std::size_t>(g(t))]; };
            check.require(independent(s, f, hg),
                          "independence not preserved by post-composition");
        }
    }
    check.require(composition_premises >= 100, "post-composition law premise fired too rarely");

    for (int trial = 0; trial < 1000; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn f(rng, 2), g(rng, 2);
        check.require(independent(s, f, g) == testgen::independent_via_conditioning(s, f, g),
                      "independence disagrees with its conditioning characterisation");
    }

    int joint_premises = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn f(rng, 2), g(rng, 2), h(rng, 2);
        if (cond_independent(s, f, g, h) && independent(s, f, h)) {
            ++joint_premises;
            auto pair_gh = [&](const Tuple& t) { return std::make_pair(g(t), h(t)); };
            check.require(independent(s, f, pair_gh),
                          "conditional independence did not compose into joint independence");
        }
    }
    check.require(joint_premises >= 50, "joint-independence law premise fired too rarely");

    // masked-path replay on random program/state pairs
    auto vars = testgen::var_pool();
    int replayed_pairs = 0;
    int replayed_paths = 0;
    while (replayed_pairs < 200) {
        CommandPtr program = testgen::random_program(rng, vars);
        State sigma0 = testgen::random_state(rng, vars);
        State masker = testgen::random_state(rng, vars);
        auto stats = testgen::replay_masked_paths(program, sigma0, masker, 20);
        if (stats.paths == 0) continue; // faulting-only start states carry no terminal paths
        ++replayed_pairs;
        replayed_paths += stats.paths;
        check.require(stats.mismatches == 0, "masked path failed to replay");
    }
    check.require(replayed_paths >= 200, "too few terminal paths replayed");

    // unmodified variables are preserved, per state and per family along q
    for (const Trial& trial : corpus()) {
        VarSet modified = mv(trial.spec.command);
        VarSet untouched;
        for (const VarName& v : trial.space.vars) {
            if (!modified.contains(v)) untouched.insert(v);
        }
        Analyzer analyzer(trial.spec.command, AnalysisMode::absorb(10000));
        for (const RandomState& sigma : trial.eligible) {
            for (std::size_t i = 0; i < sigma.size(); ++i) {
                const ExplorationResult& r = analyzer.result_for(sigma.value(i));
                if (!r.exact) continue;
                for (const auto& [terminal, mass] : r.terminal) {
                    check.require(terminal.restrict_to(untouched) ==
                                      sigma.value(i).restrict_to(untouched),
                                  "an unmodified variable changed during execution");
                }
            }
            auto run = run_random(trial.spec.command, sigma, AnalysisMode::absorb(10000));
            if (const auto* rr = std::get_if<RandomRun>(&run)) {
                RandomState lhs = random_restrict(rr->final_family(), untouched);
                RandomState rhs = rr->family.map([&](const std::pair<std::size_t, State>& p) {
                    return sigma.value(p.first).restrict_to(untouched);
                });
                check.require(lhs == rhs,
                              "terminal restriction does not factor through the source along q");
            }
        }
    }
}

void criterion_assertion_contracts(Check& check) {
    Rng rng(77777);
    auto vars = testgen::var_pool();
    std::vector<VarName> extended = vars;
    extended.emplace_back("W");

    auto make_formers = [&rng, &vars]() {
        std::vector<Assertion> out;
        out.push_back(make_event(testgen::random_bool_expr(rng, vars, 1)));
        out.push_back(make_sim(testgen::random_int_expr(rng, vars, 1),
                               testgen::random_dist_expr(rng, {})));
        out.push_back(make_det(testgen::random_int_expr(rng, vars, 1)));
        out.push_back(make_not(testgen::random_assertion(rng, vars, 1)));
        out.push_back(make_and(testgen::random_assertion(rng, vars, 1),
                               testgen::random_assertion(rng, vars, 1)));
        out.push_back(make_or(testgen::random_assertion(rng, vars, 1),
                              testgen::random_assertion(rng, vars, 1)));
        out.push_back(make_implies(testgen::random_assertion(rng, vars, 1),
                                   testgen::random_assertion(rng, vars, 1)));
        out.push_back(make_cond(testgen::random_int_expr(rng, vars, 1),
                                testgen::random_assertion(rng, vars, 1)));
        out.push_back(make_sep(testgen::random_assertion(rng, vars, 1),
                               testgen::random_assertion(rng, vars, 1)));
        return out;
    };

    std::array<int, 9> cases_per_former{};
    std::array<int, 9> defined_per_former{};
    auto needs_more = [&] {
        return *std::min_element(cases_per_former.begin(), cases_per_former.end()) < 500 ||
               *std::min_element(defined_per_former.begin(), defined_per_former.end()) < 500;
    };
    while (needs_more()) {
        std::vector<Assertion> formers = make_formers();
        for (std::size_t fi = 0; fi < formers.size(); ++fi) {
            const Assertion& a = formers[fi];
            RandomState sigma = testgen::random_random_state(rng, vars, 4, 2, true);

            SatResult r = a.eval(sigma);
            check.require((r == SatResult::undefined) == !random_is_total(sigma, a.fv),
                          "definedness does not match footprint totality for " + a.text);

            if (r != SatResult::undefined) {
                ++defined_per_former[fi];
                // stability under pointwise extension
                std::vector<RandomState::Point> larger;
                for (std::size_t i = 0; i < sigma.size(); ++i) {
                    State s = sigma.value(i);
                    for (const VarName& v : extended) {
                        if (!s.defines(v) && rng.chance(0.5)) {
                            s = s.update(v, Integer(rng.range(0, 2)));
                        }
                    }
                    larger.emplace_back(sigma.weight(i), s);
                }
                check.require(a.eval(RandomState(std::move(larger))) == r,
                              "defined verdict changed under pointwise extension for " + a.text);
            }

            std::vector<unsigned long> splits;
            for (std::size_t i = 0; i < sigma.size(); ++i) {
                splits.push_back(static_cast<unsigned long>(rng.range(1, 3)));
            }
            RandomState refined = refine(sigma, [&splits](std::size_t i) { return splits[i]; });
            check.require(a.eval(refined) == r,
                          "verdict changed under sample-space refinement for " + a.text);

            ++cases_per_former[fi];
        }
    }
}

void criterion_exact_absorption(Check& check) {
    ExplorationResult geo = absorption_solve(
        parse_program("while X = 1 do { X ~ bernoulli(1/2) }"), parse_state_literal("{X:1}"), 10000);
    check.require(geo.exact, "geometric loop analysis is not exact");
    check.require(geo.residual_mass.is_zero(), "geometric loop has nonzero divergence");
    check.require(geo.fault_mass.is_zero(), "geometric loop faults");
    check.require(geo.terminal.size() == 1 &&
                      geo.terminal.at(parse_state_literal("{X:0}")) == Rational(1),
                  "geometric loop terminal distribution is not exactly {X:0}: 1");

    ExplorationResult diverge =
        absorption_solve(parse_program("while true do { skip }"), State(), 10000);
    check.require(diverge.exact, "divergent loop analysis is not exact");
    check.require(diverge.residual_mass == Rational(1), "divergence mass is not exactly 1");
    check.require(diverge.terminal.empty() && diverge.fault_mass.is_zero(),
                  "divergent loop produced terminal or fault mass");
}

void criterion_mass_conservation(Check& check) {
    // every exploration reachable from the corpus, in both modes
    Rng rng(999);
    for (const Trial& trial : corpus()) {
        for (const RandomState& sigma : trial.eligible) {
            for (std::size_t i = 0; i < sigma.size(); ++i) {
                ExplorationResult absorbed =
                    absorption_solve(trial.spec.command, sigma.value(i), 10000);
                check.require(absorbed.terminal_total() + absorbed.fault_mass +
                                      absorbed.residual_mass ==
                                  Rational(1),
                              "absorption mass is not conserved");
                ExplorationResult bounded =
                    explore(trial.spec.command, sigma.value(i), rng.range(0, 30));
                check.require(bounded.terminal_total() + bounded.fault_mass +
                                      bounded.residual_mass ==
                                  Rational(1),
                              "bounded exploration mass is not conserved");
            }
        }
    }
}

struct Criterion {
    int id;
    std::string name;
    std::function<void(Check&)> run;
    long budget_ms;
};

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "safety counterexample and its unsafe variant", criterion_safety_counterexample, 1000},
        {2, "relative-tightness failure with exact terminal distribution",
         criterion_tightness_failure, 1000},
        {3, "frame violation found directly and by search", criterion_frame_violation, 1000},
        {4, "frame soundness across the randomized corpus", criterion_frame_soundness, 300000},
        {5, "relative tightness across the randomized corpus", criterion_tightness_corpus,
         300000},
        {6, "probability laws, masked-path replay, preservation lemmas",
         criterion_probability_laws, 300000},
        {7, "assertion contracts (definedness, monotonicity, refinement)",
         criterion_assertion_contracts, 300000},
        {8, "exact absorption of the geometric and divergent loops", criterion_exact_absorption,
         1000},
        {9, "exact mass conservation on every corpus exploration", criterion_mass_conservation,
         300000},
    };

    bool all_pass = true;
    for (const Criterion& criterion : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        bool in_budget = ms <= criterion.budget_ms;
        bool pass = check.failures.empty() && in_budget;
        all_pass = all_pass && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion.id << ": "
                  << criterion.name << " (" << check.checks << " checks, " << ms << " ms)\n";
        if (!in_budget) {
            std::cout << "     exceeded time budget of " << criterion.budget_ms << " ms\n";
        }
        for (std::size_t i = 0; i < check.failures.size() && i < 5; ++i) {
            std::cout << "     " << check.failures[i] << "\n";
        }
        if (check.failures.size() > 5) {
            std::cout << "     ... and " << check.failures.size() - 5 << " more failures\n";
        }
    }
    return all_pass ? 0 : 1;
}
