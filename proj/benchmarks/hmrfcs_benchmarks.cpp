#include <benchmark/benchmark.h>

#include "hmrfcs/cuckoo_search.hpp"
#include "hmrfcs/energy.hpp"
#include "hmrfcs/image.hpp"
#include "hmrfcs/levy.hpp"

namespace {

hmrfcs::GrayImage phantom_image(int side) {
  hmrfcs::PhantomSpec spec;
  spec.width = side;
  spec.height = side;
  spec.seed = 1;
  return hmrfcs::generate_phantom(spec).image;
}

const hmrfcs::MeansVector kMeans{31, 88, 152, 207};

void BM_PsiPerPixel(benchmark::State& state) {
  const auto image = phantom_image(static_cast<int>(state.range(0)));
  const hmrfcs::EnergyParams params;
  for (auto _ : state) benchmark::DoNotOptimize(hmrfcs::psi(image, kMeans, params));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(image.size()));
}
BENCHMARK(BM_PsiPerPixel)->Arg(64)->Arg(128)->Arg(256);

void BM_EnergyModel(benchmark::State& state) {
  const auto image = phantom_image(static_cast<int>(state.range(0)));
  const hmrfcs::EnergyModel model(image, hmrfcs::EnergyParams{});
  for (auto _ : state) benchmark::DoNotOptimize(model(kMeans));
}
BENCHMARK(BM_EnergyModel)->Arg(64)->Arg(128)->Arg(256);

void BM_EnergyModelBuild(benchmark::State& state) {
  const auto image = phantom_image(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    hmrfcs::EnergyModel model(image, hmrfcs::EnergyParams{});
    benchmark::DoNotOptimize(model.pair_count());
  }
}
BENCHMARK(BM_EnergyModelBuild)->Arg(128)->Arg(256);

void BM_LevySteps(benchmark::State& state) {
  hmrfcs::Rng rng(7);
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hmrfcs::levy_steps(count, 1.5, rng));
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_LevySteps)->Arg(4)->Arg(1024);

void BM_Optimize(benchmark::State& state) {
  const hmrfcs::EnergyModel model(phantom_image(128), hmrfcs::EnergyParams{});
  hmrfcs::CsConfig config;
  config.variant = static_cast<hmrfcs::Variant>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(hmrfcs::optimize(std::cref(model), config).best_energy);
  }
  state.SetLabel(std::string(hmrfcs::to_string(config.variant)));
}
BENCHMARK(BM_Optimize)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
