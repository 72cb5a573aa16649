#include <benchmark/benchmark.h>

#include "regkit/bootkn.hpp"
#include "regkit/designs.hpp"
#include "regkit/isd.hpp"
#include "regkit/metrics.hpp"
#include "regkit/rng.hpp"

namespace {

regkit::DiscreteLaw random_law(std::size_t m, std::uint64_t key) {
  regkit::CounterRng rng(key, 0);
  std::vector<double> x(m);
  for (auto& v : x) v = rng.normal();
  return regkit::DiscreteLaw::uniform_over(std::move(x));
}

void BM_BlDistance(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = random_law(m, 1), q = random_law(m, 2);
  for (auto _ : state) benchmark::DoNotOptimize(regkit::bl_distance(p, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BlDistance)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_W1Distance(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = random_law(m, 1), q = random_law(m, 2);
  for (auto _ : state) benchmark::DoNotOptimize(regkit::w1_distance(p, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_W1Distance)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_IsdEstimate(benchmark::State& state) {
  regkit::CounterRng rng(3, 0);
  const auto sample = regkit::draw_normal(static_cast<std::size_t>(state.range(0)), rng);
  regkit::KernelSpec kernel;
  kernel.lambda = 1;
  kernel.leave_one_out = true;
  for (auto _ : state) benchmark::DoNotOptimize(regkit::isd_estimate(kernel, 4.0, sample));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IsdEstimate)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_BootLaw(benchmark::State& state) {
  regkit::CounterRng rng(4, 0);
  const auto sample = regkit::draw_normal(1000, rng);
  const auto B = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(regkit::boot_law(sample, 32, B, 2024));
}
BENCHMARK(BM_BootLaw)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
