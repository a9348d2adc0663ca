#include "multisym/alternating.hpp"
#include "multisym/bundle.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace multisym;

namespace {

AlternatingForm random_form(std::mt19937_64& rng, int dim, int degree) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    AlternatingForm a(dim, degree);
    for (const MultiIndex& I : MultiIndex::enumerate(degree, dim)) a[I] = u(rng);
    return a;
}

void BM_Wedge(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    std::mt19937_64 rng(1);
    const auto a = random_form(rng, dim, 2);
    const auto b = random_form(rng, dim, 2);
    for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge)->Arg(4)->Arg(6)->Arg(9);

void BM_Contract(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    const auto a = random_form(rng, dim, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix V(dim, 2);
    for (int i = 0; i < dim; ++i) V.row(i) << u(rng), u(rng);
    const MultiVector X = MultiVector::decomposable(V);
    for (auto _ : state) benchmark::DoNotOptimize(contract(X, a));
}
BENCHMARK(BM_Contract)->Arg(4)->Arg(6)->Arg(9);

void BM_OmegaFlatRank(benchmark::State& state) {
    const BundleShape s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto w = omega_coordinate(s);
    for (auto _ : state) benchmark::DoNotOptimize(numerical_rank(flat_matrix(w)));
}
BENCHMARK(BM_OmegaFlatRank)->Args({1, 1})->Args({2, 1})->Args({2, 2})->Args({3, 2});

}  // namespace
