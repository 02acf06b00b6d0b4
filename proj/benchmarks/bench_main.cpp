#include <benchmark/benchmark.h>

#include "bsr/certify.hpp"
#include "bsr/gbar.hpp"
#include "bsr/instance.hpp"
#include "bsr/recovery.hpp"
#include "bsr/thresholds.hpp"

namespace {

void BM_alpha_weak(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    double beta = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bsr::thresholds::alpha_weak(beta, d).alpha_w);
        beta += 1e-4;
        if (beta > 0.95) beta = 0.05;
    }
}
BENCHMARK(BM_alpha_weak)->Arg(1)->Arg(4)->Arg(16);

void BM_waterfill(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto sample = bsr::thresholds::sample_gbar(n, n / 5, 3, bsr::RngSpec{7, 0});
    for (auto _ : state) benchmark::DoNotOptimize(bsr::thresholds::waterfill(sample).f_value);
    state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_waterfill)->Arg(1000)->Arg(10000)->Arg(100000)->Complexity();

bsr::ProblemInstance make_instance(std::size_t n, std::size_t d, double alpha, double beta,
                                   std::uint64_t seed) {
    bsr::BlockStructure st;
    st.n = n;
    st.d = d;
    st.m = static_cast<std::size_t>(alpha * static_cast<double>(n));
    st.k = static_cast<std::size_t>(beta * static_cast<double>(n));
    return bsr::generate_instance(st, 1.0, 2.0, bsr::RngSpec{seed, 0});
}

void BM_solve_group_bp(benchmark::State& state) {
    const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 2, 0.7, 0.2, 11);
    for (auto _ : state) {
        auto res = bsr::recovery::solve_group_bp(inst.A, inst.y, 2);
        benchmark::DoNotOptimize(res.objective);
    }
}
BENCHMARK(BM_solve_group_bp)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_minimize_dual(benchmark::State& state) {
    const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 2, 0.7, 0.2, 13);
    for (auto _ : state) {
        auto dm = bsr::certify::minimize_dual(inst.A, 2, inst.support, inst.directions);
        benchmark::DoNotOptimize(dm.g_min);
    }
}
BENCHMARK(BM_minimize_dual)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
