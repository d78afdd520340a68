#include <benchmark/benchmark.h>

#include "boostdet/cascade.hpp"
#include "boostdet/eval.hpp"

using namespace boostdet;

namespace {

// a small trained cascade shared by the scanning benchmarks
const CascadeModel& bench_model() {
    static const CascadeModel model = [] {
        CrossParams params;
        params.base = 12;
        const CrossTraining data = gen_cross_training(120, 8, 11, params);
        CascadeLimits limits;
        limits.max_stages = 2;
        limits.stage_rounds = {4, 10};
        limits.negatives_per_stage = 300;
        limits.seed = 11;
        limits.jobs = 4;
        return train_cascade(data.faces, data.nonface_images, StageGoals{},
                             CascadeLearner::Stumps, limits, params.base);
    }();
    return model;
}

void BM_CascadeClassify(benchmark::State& state) {
    const CascadeModel& m = bench_model();
    Rng rng(5);
    GrayImage img = make_image(128, 128);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.below(110));
    const IntegralPair ip(img);
    const FeaturePool pool = enumerate_pool(m.base);
    const ScaledFeatureLUT lut(pool, 1.0);
    int x = 0, y = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cascade_classify(m, ip, {x, y, m.base, m.base}, lut).stages_run);
        x = (x + 7) % (img.width - m.base);
        y = (y + 3) % (img.height - m.base);
    }
}
BENCHMARK(BM_CascadeClassify);

void BM_Detect(benchmark::State& state) {
    const CascadeModel& m = bench_model();
    CrossParams params;
    params.base = 12;
    params.image_w = params.image_h = static_cast<int>(state.range(0));
    const CrossCorpus corpus = gen_cross_corpus(1, 3, 7, params);
    ScanConfig cfg;
    cfg.jobs = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect(m, corpus.images[0], cfg).detections.size());
    }
}
BENCHMARK(BM_Detect)->Arg(96)->Arg(192)->Unit(benchmark::kMillisecond);

}  // namespace
