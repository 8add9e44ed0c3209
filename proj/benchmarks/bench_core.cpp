#include <benchmark/benchmark.h>

#include "bgmac/capacities.hpp"
#include "bgmac/channel.hpp"
#include "bgmac/memory_channel.hpp"
#include "bgmac/region.hpp"

namespace {

bgmac::PhaseInsensitiveBgmac fig4_channel() {
  return bgmac::interference_bgmac({1.0 / 3.0, 2.0 / 3.0},
                                   bgmac::PointToPointBgc{false, 0.1, 0.1});
}

void BM_VonNeumannEntropy(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  const auto v = bgmac::thermal_cm(0.4, modes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bgmac::von_neumann_entropy(v));
  }
}
BENCHMARK(BM_VonNeumannEntropy)->Arg(2)->Arg(4)->Arg(8);

void BM_EaBgcCapacity(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(bgmac::ea_bgc_capacity(false, 0.5, 0.1, 0.1));
  }
}
BENCHMARK(BM_EaBgcCapacity);

void BM_RateFunctional(benchmark::State& state) {
  const auto channel = fig4_channel();
  const bgmac::EnergyBudget budget{{1.0, 2.0}};
  const auto encoding = bgmac::GaussianEncoding::tmsv(2);
  const auto universe = bgmac::SenderSet::universe(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bgmac::rate_functional(channel, encoding, budget, universe));
  }
}
BENCHMARK(BM_RateFunctional);

void BM_OneShotRegion(benchmark::State& state) {
  const auto channel = fig4_channel();
  const bgmac::EnergyBudget budget{{1.0, 2.0}};
  const auto encoding = bgmac::GaussianEncoding::tmsv(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bgmac::one_shot_region(channel, encoding, budget));
  }
}
BENCHMARK(BM_OneShotRegion);

void BM_RayMaximize(benchmark::State& state) {
  const auto channel = fig4_channel();
  const bgmac::EnergyBudget budget{{1.0, 2.0}};
  bgmac::RayConfig config;
  config.starts = 1;
  config.max_iterations = static_cast<int>(state.range(0));
  const Eigen::Vector2d direction(1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bgmac::ray_maximize(channel, budget, direction, config));
  }
}
BENCHMARK(BM_RayMaximize)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MemoryUnravel(benchmark::State& state) {
  bgmac::CausalMemoryParams params{0.5, 0.5, static_cast<int>(state.range(0)), 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bgmac::unravel(params));
  }
}
BENCHMARK(BM_MemoryUnravel)->Arg(3)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
