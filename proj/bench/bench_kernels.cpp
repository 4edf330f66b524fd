// Serial reference vs OpenMP kernel for the experiment runner and the
// exhaustive enumerations.

#include <benchmark/benchmark.h>

#include <vector>

#include "vbal/harness.hpp"
#include "vbal/oracles.hpp"

namespace {

vbal::ExperimentConfig experiment(vbal::StrategyKind kind) {
    vbal::ExperimentConfig cfg;
    cfg.strategy = kind;
    cfg.n_values = {256};
    cfg.trials = 32;
    cfg.params.seed = 1;
    return cfg;
}

void BM_ExperimentSerial(benchmark::State& state) {
    const auto cfg = experiment(static_cast<vbal::StrategyKind>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vbal::run_experiment_serial(cfg));
}

void BM_ExperimentParallel(benchmark::State& state) {
    const auto cfg = experiment(static_cast<vbal::StrategyKind>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vbal::run_experiment(cfg));
}

std::vector<vbal::SignVector> vectors(std::size_t T, std::size_t n) {
    vbal::RngStream rng(3, 0);
    std::vector<vbal::SignVector> out;
    for (std::size_t t = 0; t < T; ++t) out.push_back(vbal::sample_vector(rng, n));
    return out;
}

void BM_OfflineSerial(benchmark::State& state) {
    const auto vs = vectors(static_cast<std::size_t>(state.range(0)), 16);
    for (auto _ : state) benchmark::DoNotOptimize(vbal::offline_optimum_serial(vs));
}

void BM_OfflineParallel(benchmark::State& state) {
    const auto vs = vectors(static_cast<std::size_t>(state.range(0)), 16);
    for (auto _ : state) benchmark::DoNotOptimize(vbal::offline_optimum(vs));
}

std::vector<double> weights(std::size_t m) {
    vbal::RngStream rng(4, 0);
    std::vector<double> a(m);
    for (auto& x : a) x = 1.0 + 3.0 * rng.next_unit();
    return a;
}

void BM_PzSerial(benchmark::State& state) {
    const auto a = weights(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vbal::pz_enumerate_serial(a));
}

void BM_PzParallel(benchmark::State& state) {
    const auto a = weights(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vbal::pz_enumerate(a));
}

void BM_SpreadSerial(benchmark::State& state) {
    const auto a = weights(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vbal::spread_enumerate_serial(a, 0.0, 2.0));
}

void BM_SpreadParallel(benchmark::State& state) {
    const auto a = weights(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vbal::spread_enumerate(a, 0.0, 2.0));
}

constexpr auto kPower = static_cast<int>(vbal::StrategyKind::power_greedy);
constexpr auto kMajority = static_cast<int>(vbal::StrategyKind::majority);

}  // namespace

BENCHMARK(BM_ExperimentSerial)->Arg(kPower)->Arg(kMajority)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Arg(kPower)->Arg(kMajority)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OfflineSerial)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OfflineParallel)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PzSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PzParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SpreadSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpreadParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
