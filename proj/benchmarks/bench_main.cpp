#include <benchmark/benchmark.h>

#include "drrs/analysis.hpp"
#include "drrs/procedures.hpp"

namespace {

void BM_PhiloxNormal(benchmark::State& state) {
    drrs::CounterSequence rng(drrs::make_key(42), drrs::StreamLane::Observation, 1, 1, 1, 0);
    double sink = 0.0;
    for (auto _ : state) sink += rng.next_normal();
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNormal);

void BM_AaRun(benchmark::State& state) {
    const auto instance = drrs::mm_config(static_cast<int>(state.range(0)), 5, 25.0);
    const std::int64_t budget = (1 + 200) * instance.k * instance.m;
    std::uint32_t rep = 0;
    for (auto _ : state) {
        drrs::StreamSpec spec{12345, ++rep, budget};
        benchmark::DoNotOptimize(drrs::run_aa(instance, budget, spec));
    }
    state.SetItemsProcessed(state.iterations() * budget);
}
BENCHMARK(BM_AaRun)->Arg(5)->Arg(10);

void BM_GaaTttsRun(benchmark::State& state) {
    const auto instance = drrs::mm_config(5, 3, 25.0);
    drrs::GaaConfig config;
    config.n0 = 20;
    config.delta_m = 1;
    config.delta_k = 1;
    config.joint_mode = true;
    config.m_rule = std::make_shared<drrs::EpsilonGreedyRule>(
        std::make_shared<drrs::TttsRule>(0.5), 0.1);
    const std::int64_t budget = (20 + 100) * instance.k * instance.m;
    std::uint32_t rep = 0;
    for (auto _ : state) {
        drrs::StreamSpec spec{12345, ++rep, budget};
        benchmark::DoNotOptimize(drrs::run_gaa(instance, budget, config, spec));
    }
    state.SetItemsProcessed(state.iterations() * budget);
}
BENCHMARK(BM_GaaTttsRun);

void BM_SBound(benchmark::State& state) {
    const auto instance = drrs::sc_config(3, 2, 0.5, 25.0);
    const double b_delta = 0.25;
    const std::int64_t horizon = drrs::s_bound_horizon(instance, b_delta);
    std::uint32_t rep = 0;
    for (auto _ : state) {
        drrs::StreamSpec spec{99, ++rep, horizon};
        const auto paths = drrs::backend_path_provider(instance, spec);
        benchmark::DoNotOptimize(drrs::s_bound(instance, paths, b_delta, horizon));
    }
}
BENCHMARK(BM_SBound);

}  // namespace

BENCHMARK_MAIN();
