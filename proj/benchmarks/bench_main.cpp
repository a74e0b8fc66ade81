#include <benchmark/benchmark.h>

#include "cllab/abelian_groups.hpp"
#include "cllab/curve.hpp"
#include "cllab/pic0.hpp"
#include "cllab/quadratic_forms.hpp"
#include "cllab/samplers.hpp"

namespace {

void BM_Pic0Genus2Split(benchmark::State& state) {
  const auto curves = cllab::enumerate_curves(5, 6, cllab::Model::Split);
  std::size_t i = 0;
  for (auto _ : state) {
    cllab::Pic0 pic(curves[i++ % curves.size()]);
    benchmark::DoNotOptimize(pic.group().order);
  }
}
BENCHMARK(BM_Pic0Genus2Split)->Unit(benchmark::kMillisecond);

void BM_Pic0Genus3Inert(benchmark::State& state) {
  const auto curves = cllab::enumerate_curves(3, 8, cllab::Model::Inert);
  std::size_t i = 0;
  for (auto _ : state) {
    cllab::Pic0 pic(curves[(i++ * 37) % curves.size()]);
    benchmark::DoNotOptimize(pic.group().order);
  }
}
BENCHMARK(BM_Pic0Genus3Inert)->Unit(benchmark::kMillisecond);

void BM_ClassGroupImaginary(benchmark::State& state) {
  std::int64_t d = -state.range(0);
  for (auto _ : state) {
    do {
      --d;
    } while (!cllab::is_fundamental_discriminant(d));
    cllab::ClassGroup cl(d);
    benchmark::DoNotOptimize(cl.order());
  }
}
BENCHMARK(BM_ClassGroupImaginary)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMicrosecond);

void BM_ClassGroupReal(benchmark::State& state) {
  std::int64_t d = state.range(0);
  for (auto _ : state) {
    do {
      ++d;
    } while (!cllab::is_fundamental_discriminant(d));
    cllab::ClassGroup cl(d);
    benchmark::DoNotOptimize(cl.order());
  }
}
BENCHMARK(BM_ClassGroupReal)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

void BM_CokernelSampler(benchmark::State& state) {
  cllab::Rng rng(1, 0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cllab::sample_mu_u(3, 0, n, 6, rng));
}
BENCHMARK(BM_CokernelSampler)->Arg(10)->Arg(20);

void BM_SurCount(benchmark::State& state) {
  const auto b = cllab::GroupType::make(3, {3, 2, 1});
  const auto a = cllab::GroupType::make(3, {1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(cllab::sur_count(b, a));
}
BENCHMARK(BM_SurCount);

}  // namespace

BENCHMARK_MAIN();
