#include <cmath>
#include <filesystem>

#include "doctest.h"

#include "boostdet/error.hpp"
#include "boostdet/eval.hpp"
#include "boostdet/model_io.hpp"

using namespace boostdet;

namespace {

constexpr int kBase = 10;

CrossParams small_params() {
    CrossParams p;
    p.base = kBase;
    p.image_w = p.image_h = 64;
    return p;
}

const CascadeModel& eval_model() {
    static const CascadeModel model = [] {
        const CrossTraining data = gen_cross_training(100, 8, 53, small_params());
        CascadeLimits limits;
        limits.max_stages = 2;
        limits.stage_rounds = {4, 16};
        limits.max_rounds_per_stage = 24;
        limits.negatives_per_stage = 250;
        limits.seed = 7;
        limits.jobs = 2;
        return train_cascade(data.faces, data.nonface_images, StageGoals{},
                             CascadeLearner::Stumps, limits, kBase);
    }();
    return model;
}

CascadeModel reject_all_model() {
    const FeaturePool pool = enumerate_pool(kBase);
    CascadeModel m;
    m.base = kBase;
    m.pool_digest = pool_digest(pool);
    StrongClassifier s;
    s.rounds.push_back({1.0, Stump{0, 0.0, +1}});
    s.theta = std::numeric_limits<double>::max();
    m.stages.push_back(s);
    return m;
}

}  // namespace

TEST_CASE("two gaussians at ratio 1 are balanced within one sample") {
    for (const std::size_t n : {10u, 11u, 100u}) {
        const Dataset data = gen_two_gaussians(n, 1.0, 3);
        long long pos = 0, neg = 0;
        for (std::size_t i = 0; i < data.size(); ++i) (data.label(i) > 0 ? pos : neg) += 1;
        CHECK(std::llabs(pos - neg) <= 1);
        CHECK(pos + neg == static_cast<long long>(n));
    }
}

TEST_CASE("two gaussians at ratio 10 have ceil(n/11) minority samples") {
    const Dataset data = gen_two_gaussians(220, 10.0, 5);
    long long pos = 0;
    for (std::size_t i = 0; i < data.size(); ++i) pos += data.label(i) > 0;
    CHECK(pos == 20);  // ceil(220 / 11)

    const Dataset odd = gen_two_gaussians(100, 10.0, 5);
    long long pos_odd = 0;
    for (std::size_t i = 0; i < odd.size(); ++i) pos_odd += odd.label(i) > 0;
    CHECK(pos_odd == 10);  // ceil(100 / 11) = 10
}

TEST_CASE("cross corpus carries images times targets ground-truth rects") {
    const CrossCorpus corpus = gen_cross_corpus(5, 3, 7, small_params());
    REQUIRE(corpus.images.size() == 5);
    std::size_t truths = 0;
    for (const auto& t : corpus.truths) truths += t.size();
    CHECK(truths == 15);
    // every truth inside its image
    for (std::size_t i = 0; i < corpus.images.size(); ++i)
        for (const Rect& r : corpus.truths[i]) CHECK(corpus.images[i].contains(r));
}

TEST_CASE("synthetic generators are deterministic in the seed") {
    const Dataset a = gen_two_moons(60, 0.2, 9);
    const Dataset b = gen_two_moons(60, 0.2, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.label(i) == b.label(i));
        CHECK(a.point(i)[0] == b.point(i)[0]);
        CHECK(a.point(i)[1] == b.point(i)[1]);
    }
    const CrossCorpus ca = gen_cross_corpus(2, 2, 11, small_params());
    const CrossCorpus cb = gen_cross_corpus(2, 2, 11, small_params());
    CHECK(ca.images[0].data == cb.images[0].data);
    CHECK(ca.truths == cb.truths);
}

TEST_CASE("corpus round-trips through annotations and pgm files") {
    const CrossCorpus corpus = gen_cross_corpus(3, 2, 13, small_params());
    const std::string dir = "/tmp/boostdet_test_corpus";
    std::filesystem::remove_all(dir);
    save_cross_corpus(corpus, dir);
    const LoadedCorpus loaded = load_corpus(load_annotations(dir + "/annotations.txt"));
    REQUIRE(loaded.items.size() == 3);
    CHECK(loaded.total_truths() == 6);
    for (std::size_t i = 0; i < loaded.items.size(); ++i) {
        CHECK(loaded.items[i].image.data == corpus.images[i].data);
        CHECK(loaded.items[i].truths == corpus.truths[i]);
    }
}

TEST_CASE("roc endpoints: reject-all and accept-all") {
    const CrossCorpus corpus = gen_cross_corpus(4, 3, 17, small_params());
    const LoadedCorpus loaded = to_loaded_corpus(corpus);
    const double inf = std::numeric_limits<double>::infinity();
    const auto points = roc_curve(eval_model(), loaded, {}, {inf, 0.0, -inf});
    REQUIRE(points.size() == 3);
    // theta = +inf rejects everything
    CHECK(points.front().threshold == inf);
    CHECK(points.front().false_detections == 0);
    CHECK(points.front().detection_rate == 0.0);
    // theta = -inf admits every cached group: both counts are maximal
    const RocCache cache = build_roc_cache(eval_model(), loaded, {});
    const MatchCounts all = count_at_threshold(cache, -inf, 0.5);
    CHECK(points.back().threshold == -inf);
    CHECK(points.back().false_detections == static_cast<int>(all.false_detections));
    CHECK(points.back().detection_rate ==
          doctest::Approx(static_cast<double>(all.matched) / cache.total_truths));
}

TEST_CASE("roc staircase is monotone and matches a brute-force recount") {
    const CrossCorpus corpus = gen_cross_corpus(5, 3, 19, small_params());
    const LoadedCorpus loaded = to_loaded_corpus(corpus);
    const RocCache cache = build_roc_cache(eval_model(), loaded, {});
    const auto sweep = natural_sweep(cache);
    const auto points = roc_curve(eval_model(), loaded, {}, sweep);

    for (std::size_t i = 1; i < points.size(); ++i) {
        // thresholds descend; both counts may only grow
        CHECK(points[i].threshold <= points[i - 1].threshold);
        CHECK(points[i].false_detections >= points[i - 1].false_detections);
        CHECK(points[i].detection_rate >= points[i - 1].detection_rate - 1e-12);
    }

    // independent recount: redo the greedy matching in test code
    for (const RocPoint& p : points) {
        std::size_t matched = 0, fd = 0;
        for (const auto& img : cache.images) {
            std::vector<char> taken(img.truths.size(), 0);
            for (const Detection& g : img.groups) {
                if (!(g.score >= p.threshold)) continue;
                double best_iou = 0.0;
                std::size_t best = img.truths.size();
                for (std::size_t t = 0; t < img.truths.size(); ++t) {
                    if (taken[t]) continue;
                    const double iou = rect_iou(g.rect, img.truths[t]);
                    if (iou >= 0.5 && iou > best_iou) {
                        best_iou = iou;
                        best = t;
                    }
                }
                if (best < img.truths.size()) {
                    taken[best] = 1;
                    ++matched;
                } else {
                    ++fd;
                }
            }
        }
        CHECK(p.false_detections == static_cast<int>(fd));
        CHECK(p.detection_rate ==
              doctest::Approx(static_cast<double>(matched) / cache.total_truths));
    }
}

TEST_CASE("greedy matching never assigns two groups to one truth") {
    RocCache cache;
    RocCache::Image img;
    img.truths = {{10, 10, 10, 10}};
    img.groups = {{{10, 10, 10, 10}, 1.0, 5.0}, {{11, 11, 10, 10}, 1.0, 4.0}};
    cache.images.push_back(img);
    cache.total_truths = 1;
    const MatchCounts counts = count_at_threshold(cache, -1e300, 0.5);
    CHECK(counts.matched == 1);
    CHECK(counts.false_detections == 1);
}

TEST_CASE("empty sweep is rejected") {
    const CrossCorpus corpus = gen_cross_corpus(1, 1, 23, small_params());
    CHECK_THROWS_AS(roc_curve(eval_model(), to_loaded_corpus(corpus), {}, {}), ConfigError);
}

TEST_CASE("error table: near-perfect detector scores 0.00, reject-all scores 100.00") {
    const CrossCorpus corpus = gen_cross_corpus(4, 3, 29, small_params());
    const LoadedCorpus loaded = to_loaded_corpus(corpus);
    const CascadeModel rejector = reject_all_model();
    const CascadeModel& good = eval_model();
    const ErrorTable table =
        error_table({{"good", &good}, {"reject", &rejector}}, loaded, {}, {2, 5});
    REQUIRE(table.model_names.size() == 2);
    REQUIRE(table.cells[0].size() == 2);
    CHECK(table.cells[0][0] == doctest::Approx(0.0));
    CHECK(table.cells[0][1] == doctest::Approx(0.0));
    CHECK(table.cells[1][0] == doctest::Approx(100.0));
    CHECK(table.cells[1][1] == doctest::Approx(100.0));

    const std::string text = error_table_text(table);
    CHECK(text.find("good") != std::string::npos);
    CHECK(text.find("reject") != std::string::npos);
    CHECK(text.find("fd<=2") != std::string::npos);
    CHECK(text.find("100.00") != std::string::npos);
    const std::string csv = error_table_csv(table);
    CHECK(csv.find("model,fd_2,fd_5\n") == 0);
}

TEST_CASE("roc csv and svg are deterministic") {
    const CrossCorpus corpus = gen_cross_corpus(3, 2, 31, small_params());
    const LoadedCorpus loaded = to_loaded_corpus(corpus);
    const double inf = std::numeric_limits<double>::infinity();
    const auto a = roc_curve(eval_model(), loaded, {}, {inf, 1.0, -inf});
    const auto b = roc_curve(eval_model(), loaded, {}, {inf, 1.0, -inf});
    CHECK(roc_csv(a) == roc_csv(b));
    CHECK(roc_svg({{"m", a}}, "t") == roc_svg({{"m", b}}, "t"));
    CHECK(roc_svg({{"m", a}}, "t").find("<svg") == 0);
}
