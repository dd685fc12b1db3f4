#include "ergolab/algebra.hpp"
#include "ergolab/averaging.hpp"
#include "ergolab/ds_operator.hpp"
#include "ergolab/maximal.hpp"
#include "ergolab/orlicz.hpp"
#include "ergolab/random.hpp"
#include "ergolab/singular_values.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ergolab;

AlgebraPtr bench_algebra(int block_dim) {
    return make_algebra({block_dim, block_dim / 2 + 1}, {1.0, 0.5});
}

void BM_spectral_decomposition(benchmark::State& state) {
    Rng rng(7);
    AlgebraPtr alg = bench_algebra(static_cast<int>(state.range(0)));
    AlgebraElement x = random_self_adjoint(alg, rng);
    for (auto _ : state) {
        auto dec = spectral_decomposition(x);
        benchmark::DoNotOptimize(dec.eigenvalues.data());
    }
}
BENCHMARK(BM_spectral_decomposition)->Arg(4)->Arg(8)->Arg(16);

void BM_luxemburg_norm(benchmark::State& state) {
    Rng rng(11);
    AlgebraPtr alg = bench_algebra(static_cast<int>(state.range(0)));
    AlgebraElement x = random_self_adjoint(alg, rng);
    OrliczFunction phi = OrliczFunction::power(2.0);
    for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(x, phi));
}
BENCHMARK(BM_luxemburg_norm)->Arg(4)->Arg(8)->Arg(16);

void BM_average_accumulation(benchmark::State& state) {
    Rng rng(13);
    AlgebraPtr alg = bench_algebra(4);
    DsOperator op = DsOperator::from_unitary(random_unitary(alg, rng));
    AlgebraElement x = random_self_adjoint(alg, rng);
    const std::int64_t horizon = state.range(0);
    for (auto _ : state) {
        AverageRequest req(op, WeightSequence::constant_one(alg), std::nullopt, std::nullopt, x,
                           horizon);
        benchmark::DoNotOptimize(average(req, horizon));
    }
}
BENCHMARK(BM_average_accumulation)->Arg(64)->Arg(512)->Arg(4096);

void BM_yeadon_search(benchmark::State& state) {
    Rng rng(17);
    AlgebraPtr alg = bench_algebra(static_cast<int>(state.range(0)));
    DsOperator op = DsOperator::from_unitary(random_unitary(alg, rng));
    AlgebraElement x = random_positive(alg, rng);
    const double eps = 0.5 * trace_norm(x) / alg->total_trace();
    for (auto _ : state) {
        auto res = search_yeadon(op, x, eps, 64);
        benchmark::DoNotOptimize(res.found);
    }
}
BENCHMARK(BM_yeadon_search)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
