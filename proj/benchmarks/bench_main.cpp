#include <benchmark/benchmark.h>

#include <sstream>

#include "pslab/assert_syntax.hpp"
#include "pslab/literals.hpp"
#include "pslab/parser.hpp"
#include "pslab/semantics.hpp"
#include "pslab/speccheck.hpp"

using namespace pslab;

namespace {

CommandPtr geometric_loop() {
    static CommandPtr c = parse_program("while X = 1 do { X ~ bernoulli(1/2) }");
    return c;
}

// A chain of n sequential fair coins: 2^n terminal states.
CommandPtr coin_chain(int n) {
    std::ostringstream src;
    for (int i = 0; i < n; ++i) {
        if (i > 0) src << ";\n";
        src << "X" << i << " ~ bernoulli(1/2)";
    }
    return parse_program(src.str());
}

void bm_explore_geometric(benchmark::State& state) {
    State initial = parse_state_literal("{X:1}");
    for (auto _ : state) {
        benchmark::DoNotOptimize(explore(geometric_loop(), initial, state.range(0)));
    }
}
BENCHMARK(bm_explore_geometric)->Arg(16)->Arg(64)->Arg(256);

void bm_absorption_geometric(benchmark::State& state) {
    State initial = parse_state_literal("{X:1}");
    for (auto _ : state) {
        benchmark::DoNotOptimize(absorption_solve(geometric_loop(), initial, 10000));
    }
}
BENCHMARK(bm_absorption_geometric);

void bm_absorption_coin_chain(benchmark::State& state) {
    CommandPtr chain = coin_chain(static_cast<int>(state.range(0)));
    State initial;
    for (auto _ : state) {
        benchmark::DoNotOptimize(absorption_solve(chain, initial, 100000));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_absorption_coin_chain)->Arg(4)->Arg(8)->Arg(12);

void bm_independence_product(benchmark::State& state) {
    CommandPtr chain = coin_chain(static_cast<int>(state.range(0)));
    auto run = run_random(chain, parse_random_state_literal("1 {}"),
                          AnalysisMode::absorb(100000));
    const auto& family = std::get<RandomRun>(run).final_family();
    VarSet left{VarName("X0")};
    VarSet right{VarName("X1")};
    for (auto _ : state) {
        benchmark::DoNotOptimize(independent(
            family, [&left](const State& s) { return s.restrict_to(left); },
            [&right](const State& s) { return s.restrict_to(right); }));
    }
}
BENCHMARK(bm_independence_product)->Arg(4)->Arg(8)->Arg(12);

void bm_check_partial_framed(benchmark::State& state) {
    Spec spec{parse_assertion("[X = 0 || X = 1]"), parse_program("X := X mod 2"),
              parse_assertion("[X = 0 || X = 1]")};
    Spec framed = apply_frame(spec, parse_assertion("[Y = 0 || Y = 1]"));
    RandomState sigma = parse_random_state_literal(
        "1/4 {X:0, Y:0} + 1/4 {X:0, Y:1} + 1/4 {X:1, Y:0} + 1/4 {X:1, Y:1}");
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_partial(framed, sigma));
    }
}
BENCHMARK(bm_check_partial_framed);

void bm_parse_pretty_roundtrip(benchmark::State& state) {
    CommandPtr chain = coin_chain(24);
    std::string source = to_source(chain);
    for (auto _ : state) {
        benchmark::DoNotOptimize(to_source(parse_program(source)));
    }
}
BENCHMARK(bm_parse_pretty_roundtrip);

} // namespace

BENCHMARK_MAIN();
