// Serial reference path against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include "gmfs/coeff.hpp"
#include "gmfs/harness.hpp"
#include "gmfs/oracle.hpp"

using namespace gmfs;

namespace {

Execution exec_of(const benchmark::State& st) { return st.range(0) ? Execution::parallel : Execution::serial; }

void BM_CoeffTensor(benchmark::State& st) {
    Interval iv(0.0, 1.0);
    Kernel K(iv, {KernelFactor::sqrt_shift(), KernelFactor::exponential(-0.5), KernelFactor::constant(1.0)});
    auto s = OrthonormalSystem::legendre(iv);
    CoeffOptions o;
    o.exec = exec_of(st);
    const int p = static_cast<int>(st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(coeff_tensor(K, s, {p, p, p}, false, o));
}
BENCHMARK(BM_CoeffTensor)->ArgsProduct({{0, 1}, {8, 16}})->Unit(benchmark::kMillisecond);

void BM_Experiment(benchmark::State& st) {
    Interval iv(0.0, 1.0);
    ExperimentSpec spec(Kernel::unit(iv, 2), OrthonormalSystem::legendre(iv));
    spec.combo = {1, 2};
    spec.driver.m = 2;
    spec.boxes = {{4, 4}, {16, 16}};
    spec.N = 1024;
    spec.trials = 200;
    spec.seed = 1;
    spec.exec = exec_of(st);
    for (auto _ : st) benchmark::DoNotOptimize(run_experiment(spec));
}
BENCHMARK(BM_Experiment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_IteratedSum(benchmark::State& st) {
    Interval iv(0.0, 1.0);
    const int N = static_cast<int>(st.range(1));
    auto w = sample_wiener(make_partition(iv, N), 1, 3);
    auto inc = slot_increments(w, {1, 1, 1}, N);
    auto K = Kernel::unit(iv, 3);
    if (st.range(0)) {
        for (auto _ : st) benchmark::DoNotOptimize(iterated_sum(K, inc));
    } else {
        for (auto _ : st) benchmark::DoNotOptimize(iterated_sum_naive(K, inc));
    }
}
// range(0): 0 nested loops, 1 prefix accumulation
BENCHMARK(BM_IteratedSum)->ArgsProduct({{0, 1}, {64, 256}});

}  // namespace

BENCHMARK_MAIN();
