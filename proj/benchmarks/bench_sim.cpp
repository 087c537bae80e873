#include <benchmark/benchmark.h>

#include "interq/sim.hpp"
#include "interq/workload_io.hpp"

namespace {

void BM_Simulate(benchmark::State& state, const char* preset) {
    interq::RandomWorkloadSpec spec;
    spec.jobs = 12;
    spec.min_width = 4;
    spec.max_width = 90;
    spec.min_depth = 10;
    spec.max_depth = 100;
    spec.seed = 9;
    const auto jobs = interq::generate_random_workload(spec);
    const auto platform = interq::platform_preset(preset);
    interq::SimConfig config;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(interq::run_simulation(jobs, platform, config, ++seed));
}
BENCHMARK_CAPTURE(BM_Simulate, ibm, "IBM_LOCC")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, ionq, "IONQ_QCOMM")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, atom, "ATOMIC_QCOMM")->Unit(benchmark::kMillisecond);

} // namespace
