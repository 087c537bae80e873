#include <benchmark/benchmark.h>

#include "interq/scheduler.hpp"
#include "interq/workload_io.hpp"

namespace {

std::vector<interq::JobSpec> queue(int jobs) {
    interq::RandomWorkloadSpec spec;
    spec.jobs = jobs;
    spec.min_width = 4;
    spec.max_width = 40;
    spec.min_depth = 10;
    spec.max_depth = 200;
    spec.seed = 5;
    return interq::generate_random_workload(spec);
}

void BM_ScheduleInterq(benchmark::State& state) {
    const auto jobs = queue(static_cast<int>(state.range(0)));
    const auto platform = interq::platform_preset("IBM_LOCC");
    interq::SchedulerConfig config;
    for (auto _ : state) benchmark::DoNotOptimize(interq::schedule_interq(jobs, platform, config));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScheduleInterq)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void BM_ScheduleSerialRR(benchmark::State& state) {
    const auto jobs = queue(static_cast<int>(state.range(0)));
    const auto platform = interq::platform_preset("IBM_LOCC");
    for (auto _ : state) benchmark::DoNotOptimize(interq::schedule_serial_rr(jobs, platform));
}
BENCHMARK(BM_ScheduleSerialRR)->Arg(32);

} // namespace
