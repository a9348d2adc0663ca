#include "multisym/field_equations.hpp"
#include "multisym/solvers.hpp"

#include <benchmark/benchmark.h>

using namespace multisym;

namespace {

void BM_SuiteAnalytic(benchmark::State& state) {
    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    const auto pts = sample_points(e.box, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vertical_residual_suite(e.hv, s, pts));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_SuiteAnalytic)->Arg(5)->Arg(17);

void BM_SuiteGrid(benchmark::State& state) {
    const ExampleSpec& e = find_example("laplace-example");
    const int m = static_cast<int>(state.range(0));
    const auto sec = DiscreteSection::sample(e.shape, Grid(e.box, {m, m}), e.exact->value);
    for (auto _ : state) benchmark::DoNotOptimize(vertical_residual_suite(e.hv, sec));
}
BENCHMARK(BM_SuiteGrid)->Arg(17)->Arg(33);

void BM_Action(benchmark::State& state) {
    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    const Quadrature q{Quadrature::Rule::midpoint, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(action(e.hv, s, e.box, q));
}
BENCHMARK(BM_Action)->Arg(64)->Arg(200);

}  // namespace
