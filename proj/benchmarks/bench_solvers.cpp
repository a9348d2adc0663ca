#include "multisym/solvers.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace multisym;

namespace {

void BM_RK4Oscillator(benchmark::State& state) {
    const ExampleSpec& e = find_example("oscillator");
    const double step = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_ode(e.hv, e.initial.head(1), e.initial.tail(1), {0.0, 2.0 * std::numbers::pi}, step));
}
BENCHMARK(BM_RK4Oscillator)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_LaplaceSOR(benchmark::State& state) {
    const ExampleSpec& e = find_example("laplace-solver");
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_laplace(Grid(e.box, {m, m}), e.boundary));
}
BENCHMARK(BM_LaplaceSOR)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

}  // namespace
