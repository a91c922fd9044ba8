// Serial reference kernels against their OpenMP counterparts.

#include "gmp/basis.hpp"
#include "gmp/kernels.hpp"
#include "gmp/process.hpp"
#include "gmp/tree.hpp"

#include <benchmark/benchmark.h>

namespace {

const gmp::ProcessSpec& spec() {
    static const gmp::ProcessSpec s = gmp::make_ou(1.0);
    return s;
}

gmp::SynthesisPlan plan(int depth) {
    const gmp::SupportTree tree = gmp::uniform_tree(depth);
    const gmp::Basis basis(spec(), tree, depth);
    return gmp::make_synthesis_plan(basis, gmp::prefix_order_times(tree, depth));
}

template <auto Kernel>
void BM_synthesize(benchmark::State& state) {
    const auto p = plan(static_cast<int>(state.range(0)));
    const auto paths = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(p, 0, 0, paths));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paths));
}

template <auto Kernel>
void BM_refine(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    const auto paths = static_cast<std::size_t>(state.range(1));
    const gmp::SupportTree tree = gmp::uniform_tree(depth + 1);
    const auto coarse = gmp::parallel::synthesize(plan(depth), 0, 0, paths);
    const auto rp = gmp::make_refinement_plan(spec(), tree, depth);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(rp, coarse));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paths));
}

template <auto Kernel>
void BM_moments(benchmark::State& state) {
    const auto batch = gmp::parallel::synthesize(plan(static_cast<int>(state.range(0))), 0, 0,
                                                 static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(batch));
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

} // namespace

BENCHMARK(BM_synthesize<gmp::serial::synthesize>)->Args({8, 4096})->Args({12, 256});
BENCHMARK(BM_synthesize<gmp::parallel::synthesize>)->Args({8, 4096})->Args({12, 256});
BENCHMARK(BM_refine<gmp::serial::refine>)->Args({8, 4096})->Args({12, 256});
BENCHMARK(BM_refine<gmp::parallel::refine>)->Args({8, 4096})->Args({12, 256});
BENCHMARK(BM_moments<gmp::serial::moments>)->Args({5, 16384});
BENCHMARK(BM_moments<gmp::parallel::moments>)->Args({5, 16384});

BENCHMARK_MAIN();
