#include <benchmark/benchmark.h>

#include "pumpshape/diffuser.hpp"
#include "pumpshape/optics.hpp"
#include "pumpshape/shaper.hpp"
#include "pumpshape/spdc.hpp"

namespace {

using namespace pumpshape;

void BM_far_field(benchmark::State& state) {
    const Grid grid(static_cast<int>(state.range(0)), 10e-6);
    const ComplexField pump = gaussian_beam(grid, grid.extent() / 8.0, {0, 0}, {0, 0}, 404e-9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(far_field(pump));
    }
}
BENCHMARK(BM_far_field)->Arg(256)->Arg(512);

void BM_diffuser_generate(benchmark::State& state) {
    const Grid grid(static_cast<int>(state.range(0)), 10e-6);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_diffuser(grid, 100e-6, 808e-9, seed++));
    }
}
BENCHMARK(BM_diffuser_generate)->Arg(512);

void BM_coincidence_map(benchmark::State& state) {
    const Grid grid(static_cast<int>(state.range(0)), 10e-6);
    const DiffuserMap d = generate_diffuser(grid, 100e-6, 808e-9, 1);
    const ComplexField pump = gaussian_beam(grid, 1e-3, {0, 0}, {0, 0}, 404e-9);
    const WavelengthTriple w = WavelengthTriple::from_pump_signal(404e-9, 808e-9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(coincidence_map(pump, d, w, Vec2{0, 0}));
    }
}
BENCHMARK(BM_coincidence_map)->Arg(512);

void BM_feedback_evaluation(benchmark::State& state) {
    const Grid grid(512, 10e-6);
    const DiffuserMap d = generate_diffuser(grid, 100e-6, 808e-9, 1);
    const ComplexField pump = gaussian_beam(grid, 1e-3, {0, 0}, {0, 0}, 404e-9);
    const PumpTargetFeedback feedback(pump, d, 404e-9, Vec2{0, 0}, 16);
    const PhaseMask mask = PhaseMask::zero(16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(feedback(mask));
    }
}
BENCHMARK(BM_feedback_evaluation);

void BM_partition_optimize_100(benchmark::State& state) {
    const Grid grid(512, 10e-6);
    const DiffuserMap d = generate_diffuser(grid, 100e-6, 808e-9, 1);
    const ComplexField pump = gaussian_beam(grid, 1e-3, {0, 0}, {0, 0}, 404e-9);
    const PumpTargetFeedback feedback(pump, d, 404e-9, Vec2{0, 0}, 16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(partition_optimize(std::cref(feedback), 16, 100, 8, 5));
    }
}
BENCHMARK(BM_partition_optimize_100);

}  // namespace

BENCHMARK_MAIN();
