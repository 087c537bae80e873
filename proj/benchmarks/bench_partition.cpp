#include <benchmark/benchmark.h>

#include "interq/graph_cut.hpp"
#include "interq/partitioner.hpp"
#include "interq/workload_io.hpp"

namespace {

interq::JobSpec wide_job(int width) {
    interq::RandomWorkloadSpec spec;
    spec.jobs = 1;
    spec.min_width = spec.max_width = width;
    spec.min_depth = spec.max_depth = 50;
    spec.seed = 11;
    return interq::generate_random_workload(spec).front();
}

void BM_FindPartitionQcomm(benchmark::State& state) {
    const auto job = wide_job(static_cast<int>(state.range(0)));
    const auto platform = interq::platform_preset("IONQ_QCOMM");
    for (auto _ : state) benchmark::DoNotOptimize(interq::find_partition(job, interq::CommMode::QCOMM, platform));
}
BENCHMARK(BM_FindPartitionQcomm)->Arg(48)->Arg(96)->Arg(142);

void BM_IntercommModes(benchmark::State& state) {
    const auto job = wide_job(static_cast<int>(state.range(0)));
    const auto platform = interq::platform_preset("ATOMIC_QCOMM");
    for (auto _ : state) benchmark::DoNotOptimize(interq::intercomm_modes(job, platform));
}
BENCHMARK(BM_IntercommModes)->Arg(40)->Arg(120);

} // namespace
