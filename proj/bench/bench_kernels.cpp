// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels on the sawtooth roof over the golden rotation.
#include <benchmark/benchmark.h>

#include "specflow/continued_fraction.hpp"
#include "specflow/kernels.hpp"

namespace {

using namespace specflow;

const ContinuedFraction& golden() {
    static const auto cf = ContinuedFraction::expand(QuadraticIrrational::parse("(sqrt(5)-1)/2"), 40);
    return cf;
}

RoofFunction roof() {
    return RoofFunction(1.0, {Jump::at_rational(0, 1, 0.5), Jump::at_rational(1, 3, -0.2)},
                        ACComponent::tent(0.1, 0.5, 0.25));
}

template <auto Kernel>
void BM_BirkhoffBatch(benchmark::State& state) {
    const auto xs = midpoint_grid(static_cast<std::size_t>(state.range(0)));
    const auto f = roof();
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, golden().alpha(), xs, 610));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 610);
}

template <auto Kernel>
void BM_RigidityCounts(benchmark::State& state) {
    const auto xs = midpoint_grid(static_cast<std::size_t>(state.range(0)));
    const auto f = roof();
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i) times.push_back(10.0 + 0.25 * i);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, golden().alpha(), xs, times, 0.05, 80));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_BirkhoffBatch<serial::birkhoff_batch>)->Name("birkhoff_batch/serial")->Arg(1 << 10)->Arg(1 << 13);
BENCHMARK(BM_BirkhoffBatch<omp::birkhoff_batch>)->Name("birkhoff_batch/omp")->Arg(1 << 10)->Arg(1 << 13);
BENCHMARK(BM_RigidityCounts<serial::rigidity_counts>)->Name("rigidity_counts/serial")->Arg(1 << 10)->Arg(1 << 13);
BENCHMARK(BM_RigidityCounts<omp::rigidity_counts>)->Name("rigidity_counts/omp")->Arg(1 << 10)->Arg(1 << 13);

}  // namespace

BENCHMARK_MAIN();
