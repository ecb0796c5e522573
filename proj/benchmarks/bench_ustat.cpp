#include "ujel/jackknife.hpp"
#include "ujel/jel.hpp"
#include "ujel/models.hpp"
#include "ujel/normal_ci.hpp"
#include "ujel/smoothed.hpp"
#include "ujel/ustat.hpp"

#include <benchmark/benchmark.h>

using namespace ujel;

namespace {

MultiSampleDataset dataset(std::size_t n) {
    const ModelSpec model{{MobveParams{1, 1, 1}, MobveParams{1, 1, 1}, MobveParams{1, 1, 1}}};
    RandomStream rng(1, 0);
    const std::vector<std::size_t> sizes{n, n, n};
    return simulate_dataset(model, sizes, rng);
}

void LeaveOneOutCounting(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    const auto kernel = builtin_kernel("vus-diff", 3);
    for (auto _ : state) benchmark::DoNotOptimize(leave_one_out(data, kernel, EvalPath::Counting));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(LeaveOneOutCounting)->RangeMultiplier(2)->Range(8, 1024)->Complexity();

void LeaveOneOutOracle(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    const auto kernel = builtin_kernel("vus-diff", 3);
    for (auto _ : state) benchmark::DoNotOptimize(leave_one_out(data, kernel, EvalPath::Oracle));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(LeaveOneOutOracle)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void JelInterval(benchmark::State& state) {
    const auto pv = pseudo_values(dataset(static_cast<std::size_t>(state.range(0))), builtin_kernel("vus-diff", 3));
    for (auto _ : state) benchmark::DoNotOptimize(jel_confidence_interval(pv, 0.95));
}
BENCHMARK(JelInterval)->Arg(30)->Arg(100)->Arg(500);

void NormalInterval(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    const auto kernel = builtin_kernel("vus-diff", 3);
    for (auto _ : state) {
        const auto pv = pseudo_values(data, kernel);
        benchmark::DoNotOptimize(normal_ci(pv.u_value, jackknife_variance(pv), 0.95));
    }
}
BENCHMARK(NormalInterval)->Arg(30)->Arg(100)->Arg(500);

void SmoothedTheta(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    const auto bw = silverman_bandwidths(data);
    for (auto _ : state) benchmark::DoNotOptimize(smoothed_theta(data, bw));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(SmoothedTheta)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void BootstrapInterval(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bootstrap_percentile_ci(data, 0.95, 100, 7));
}
BENCHMARK(BootstrapInterval)->Arg(30)->Arg(100);

void SimulateDataset(benchmark::State& state) {
    const ModelSpec model{{FgmParetoParams{1, 1, 1, 1, 0.5}, FgmParetoParams{1, 1, 1, 1, 0.5},
                           FgmParetoParams{1, 1, 1, 1, -0.5}}};
    const std::vector<std::size_t> sizes(3, static_cast<std::size_t>(state.range(0)));
    RandomStream rng(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_dataset(model, sizes, rng));
}
BENCHMARK(SimulateDataset)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
