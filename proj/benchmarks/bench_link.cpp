#include <benchmark/benchmark.h>

#include "mccdma/harness.hpp"
#include "mccdma/hpa.hpp"
#include "mccdma/link.hpp"
#include "mccdma/receiver.hpp"
#include "mccdma/rng.hpp"

namespace {

using namespace mccdma;

// Preset geometry: K users, R = M = 8, long code, Q = 2.
Scenario bench_scenario(int users, HpaMode mode) {
    auto s = preset_base();
    s.link.users = users;
    s.link.substreams = 8;
    s.link.subcarriers = 8;
    s.link.walsh_order = 8;
    s.hpa_mode = mode;
    s.slots_per_block = 1;
    return s;
}

void BM_Modulate(benchmark::State& state) {
    const LinkSimulator link(bench_scenario(1, HpaMode::bypass));
    Rng rng(1);
    const auto symbols = random_symbols(rng, 0, link.scenario().link, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(link.modulator().modulate(symbols, link.pn(0)));
    }
    state.SetItemsProcessed(state.iterations() * link.scenario().link.samples_per_symbol());
}
BENCHMARK(BM_Modulate)->Unit(benchmark::kMillisecond);

void BM_SalehAmplifier(benchmark::State& state) {
    const LinkSimulator link(bench_scenario(1, HpaMode::bypass));
    Rng rng(2);
    const auto frame = link.modulator().modulate(random_symbols(rng, 0, link.scenario().link, 1), link.pn(0));
    const SalehParams params;
    const auto op = set_operating_point(frame, 7.0, params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_hpa(frame, params, op));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frame.size()));
}
BENCHMARK(BM_SalehAmplifier)->Unit(benchmark::kMillisecond);

void BM_Predistorter(benchmark::State& state) {
    const LinkSimulator link(bench_scenario(1, HpaMode::bypass));
    Rng rng(3);
    const auto frame = link.modulator().modulate(random_symbols(rng, 0, link.scenario().link, 1), link.pn(0));
    const SalehParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_predistorter(frame, params));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frame.size()));
}
BENCHMARK(BM_Predistorter)->Unit(benchmark::kMillisecond);

void BM_CorrelateSlot(benchmark::State& state) {
    const LinkSimulator link(bench_scenario(1, HpaMode::bypass));
    Rng rng(4);
    const auto frame = link.modulator().modulate(random_symbols(rng, 0, link.scenario().link, 1), link.pn(0));
    const Correlator corr(link.modulator(), link.pn(0));
    std::vector<Sample> out(64);
    for (auto _ : state) {
        corr.correlate_slot(frame, 0, PathTap{}, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_CorrelateSlot)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& state) {
    const auto mode = static_cast<HpaMode>(state.range(1));
    const LinkSimulator link(bench_scenario(static_cast<int>(state.range(0)), mode));
    std::uint64_t t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trial(link, 1, 0, t++, 10.0));
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_Trial)
    ->ArgsProduct({{1, 20}, {static_cast<int>(HpaMode::bypass), static_cast<int>(HpaMode::saleh_pd)}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
