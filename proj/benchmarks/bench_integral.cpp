#include <benchmark/benchmark.h>

#include "boostdet/integral.hpp"
#include "boostdet/rng.hpp"

using namespace boostdet;

namespace {

GrayImage random_image(int edge) {
    Rng rng(1);
    GrayImage img = make_image(edge, edge);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

void BM_BuildIntegral(benchmark::State& state) {
    const GrayImage img = random_image(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        IntegralPair ip(img);
        benchmark::DoNotOptimize(ip.sum_at(img.width, img.height));
    }
    state.SetItemsProcessed(state.iterations() * img.width * img.height);
}
BENCHMARK(BM_BuildIntegral)->Arg(64)->Arg(256)->Arg(1024);

void BM_RectSum(benchmark::State& state) {
    const GrayImage img = random_image(512);
    const IntegralPair ip(img);
    Rng rng(2);
    std::vector<Rect> rects(1024);
    for (auto& r : rects) {
        const int w = 1 + static_cast<int>(rng.below(200));
        const int h = 1 + static_cast<int>(rng.below(200));
        r = {static_cast<int>(rng.below(512 - w)), static_cast<int>(rng.below(512 - h)), w, h};
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rect_sum(ip, rects[i++ & 1023]));
    }
}
BENCHMARK(BM_RectSum);

void BM_WindowStats(benchmark::State& state) {
    const GrayImage img = random_image(512);
    const IntegralPair ip(img);
    for (auto _ : state) {
        benchmark::DoNotOptimize(window_stats(ip, {100, 100, 32, 32}).variance);
    }
}
BENCHMARK(BM_WindowStats);

}  // namespace
