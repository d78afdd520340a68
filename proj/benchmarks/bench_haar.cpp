#include <benchmark/benchmark.h>

#include "boostdet/haar.hpp"
#include "boostdet/rng.hpp"

using namespace boostdet;

namespace {

void BM_EnumeratePool(benchmark::State& state) {
    const int base = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const FeaturePool pool = enumerate_pool(base);
        benchmark::DoNotOptimize(pool.size());
    }
}
BENCHMARK(BM_EnumeratePool)->Arg(12)->Arg(24)->Arg(32);

void BM_BuildLut(benchmark::State& state) {
    const FeaturePool pool = enumerate_pool(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const ScaledFeatureLUT lut(pool, 1.25);
        benchmark::DoNotOptimize(lut.size());
    }
}
BENCHMARK(BM_BuildLut)->Arg(12)->Arg(24);

void BM_EvalFeatures(benchmark::State& state) {
    Rng rng(1);
    GrayImage img = make_image(64, 64);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.below(256));
    const IntegralPair ip(img);
    const FeaturePool pool = enumerate_pool(12);
    const ScaledFeatureLUT lut(pool, 1.0);
    const double std_dev = window_stats(ip, {8, 8, 12, 12}).corrected_std();
    std::size_t id = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_feature(lut, id, ip, 8, 8, std_dev));
        if (++id == pool.size()) id = 0;
    }
}
BENCHMARK(BM_EvalFeatures);

}  // namespace
