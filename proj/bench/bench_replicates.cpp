#include <benchmark/benchmark.h>

#include "cmm/degree_model.hpp"
#include "cmm/fluid.hpp"
#include "cmm/replicates.hpp"

namespace {

cmm::ReplicateSpec spec(std::size_t n) {
    return {cmm::DegreeModel::poisson(3.0), cmm::CriterionKind::UniMin, n, 16, 1, {}, {}};
}

void BM_replicates_serial(benchmark::State& st) {
    const auto s = spec(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(cmm::run_replicates_serial(s));
}

void BM_replicates_parallel(benchmark::State& st) {
    const auto s = spec(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(cmm::run_replicates(s));
}

std::vector<cmm::FluidSystem> sweep_systems() {
    std::vector<cmm::FluidSystem> out;
    for (cmm::Degree d = 2; d <= 15; ++d)
        for (auto k : {cmm::CriterionKind::Greedy, cmm::CriterionKind::UniMin})
            out.push_back(cmm::make_system(k, cmm::pmf_truncated(cmm::DegreeModel::regular(d), d)));
    return out;
}

void BM_sweep_serial(benchmark::State& st) {
    const auto sys = sweep_systems();
    for (auto _ : st) benchmark::DoNotOptimize(cmm::solve_all_serial(sys, 1e-4, {.record_stride = 1u << 30}));
}

void BM_sweep_parallel(benchmark::State& st) {
    const auto sys = sweep_systems();
    for (auto _ : st) benchmark::DoNotOptimize(cmm::solve_all(sys, 1e-4, {.record_stride = 1u << 30}));
}

}  // namespace

BENCHMARK(BM_replicates_serial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_replicates_parallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
