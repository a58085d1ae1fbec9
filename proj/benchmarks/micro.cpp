#include "latcount/bench.hpp"
#include "latcount/estimator.hpp"
#include "latcount/lp.hpp"
#include "latcount/oracle.hpp"
#include "latcount/rng.hpp"
#include "latcount/sampler.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace latcount;

Polytope random_instance(std::size_t n, std::int64_t lambda)
{
    Rng rng(1, 0);
    return gen_random(n, n, lambda, rng).polytope;
}

void BM_WalkerStep(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const ShiftedPolytope SP = shift_facets(random_instance(n, 8));
    CoordinateWalker walker(SP.transformed, std::vector<double>(n, 0.0));
    Rng rng(2, 0);
    for (auto _ : state) {
        walker.step(rng);
        benchmark::DoNotOptimize(walker.position().data());
    }
}
BENCHMARK(BM_WalkerStep)->Arg(3)->Arg(5)->Arg(8);

void BM_SampleLattice(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const ShiftedPolytope SP = shift_facets(random_instance(n, 8));
    Rng rng(3, 0);
    for (auto _ : state) {
        SampleSet S = sample_lattice(SP, 100, rng);
        benchmark::DoNotOptimize(S.points.data());
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SampleLattice)->Arg(3)->Arg(5)->Arg(8);

void BM_Maximize(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const Polytope P = random_instance(n, 8);
    std::vector<double> c(n, 1.0);
    for (auto _ : state) {
        LpResult r = maximize(c, P);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Maximize)->Arg(3)->Arg(5)->Arg(8);

void BM_ExactCount(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const Polytope P = random_instance(n, 4);
    for (auto _ : state) {
        OracleResult r = exact_count(P);
        benchmark::DoNotOptimize(r.count);
    }
}
BENCHMARK(BM_ExactCount)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state)
{
    const Polytope P = random_instance(5, 8);
    RunConfig cfg;
    cfg.epsilon = 0.2;
    cfg.delta = 0.1;
    for (auto _ : state) {
        ++cfg.seed;
        CountEstimate est = estimate(P, cfg);
        benchmark::DoNotOptimize(est.r);
    }
}
BENCHMARK(BM_Estimate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
