// Serial reference loop against the OpenMP kernel on per-weight Čech sums.
// Kernels are rebuilt every iteration so their caches start empty.

#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "torich/cohomology.hpp"

using namespace torich;

namespace {

std::shared_ptr<const Fan> p3() {
  return std::make_shared<const Fan>(Fan::build(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
                                                {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}));
}

SheafSpec twisted_forms(std::size_t degree) {
  const auto fan = p3();
  return SheafSpec::danilov_forms(fan, degree).twisted(cartier_from_divisor(fan, std::vector<Int>{0, 0, 0, 2}));
}

void run(benchmark::State& state, ExecutionMode mode) {
  const auto spec = twisted_forms(static_cast<std::size_t>(state.range(1)));
  const auto weights = box_shell(3, -1, state.range(0));
  for (auto _ : state) {
    const CechKernel kernel(spec, FieldSpec::rationals());
    const auto sum = sum_over_weights(weights, kernel.width(), [&](const MVector& m) { return kernel(m); }, mode);
    benchmark::DoNotOptimize(sum.totals.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(weights.size()));
}

void BM_CechSumSerial(benchmark::State& state) { run(state, ExecutionMode::kSerial); }
void BM_CechSumParallel(benchmark::State& state) { run(state, ExecutionMode::kParallel); }

void HyperSum(benchmark::State& state, ExecutionMode mode) {
  const auto family = SheafSpec::danilov_forms(p3(), 0);
  const auto weights = box_shell(3, -1, state.range(0));
  for (auto _ : state) {
    const HyperKernel kernel(family, FieldSpec::prime(2));
    const auto sum = sum_over_weights(weights, kernel.width(), [&](const MVector& m) { return kernel(m); }, mode);
    benchmark::DoNotOptimize(sum.totals.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(weights.size()));
}

void BM_HyperSumSerial(benchmark::State& state) { HyperSum(state, ExecutionMode::kSerial); }
void BM_HyperSumParallel(benchmark::State& state) { HyperSum(state, ExecutionMode::kParallel); }

}  // namespace

BENCHMARK(BM_CechSumSerial)->Args({3, 1})->Args({6, 1})->Args({6, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CechSumParallel)->Args({3, 1})->Args({6, 1})->Args({6, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HyperSumSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HyperSumParallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
