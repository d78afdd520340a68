#include "doctest.h"

#include "boostdet/error.hpp"
#include "boostdet/integral.hpp"
#include "oracles.hpp"

using namespace boostdet;

namespace {

GrayImage image_2x2() {
    GrayImage img = make_image(2, 2);
    img.at(0, 0) = 1;
    img.at(1, 0) = 2;
    img.at(0, 1) = 3;
    img.at(1, 1) = 4;
    return img;
}

}  // namespace

TEST_CASE("integral tables of [[1,2],[3,4]]") {
    const IntegralPair ip(image_2x2());
    // row 0 and column 0 all zero
    for (int x = 0; x <= 2; ++x) CHECK(ip.sum_at(x, 0) == 0);
    for (int y = 0; y <= 2; ++y) CHECK(ip.sum_at(0, y) == 0);
    CHECK(ip.sum_at(1, 1) == 1);
    CHECK(ip.sum_at(2, 1) == 3);
    CHECK(ip.sum_at(1, 2) == 4);
    CHECK(ip.sum_at(2, 2) == 10);
    CHECK(ip.sqsum_at(2, 2) == 1 + 4 + 9 + 16);
}

TEST_CASE("all-zero image gives all-zero tables") {
    const IntegralPair ip(make_image(3, 3, 0));
    for (int y = 0; y <= 3; ++y)
        for (int x = 0; x <= 3; ++x) {
            CHECK(ip.sum_at(x, y) == 0);
            CHECK(ip.sqsum_at(x, y) == 0);
        }
}

TEST_CASE("single pixel") {
    GrayImage img = make_image(1, 1, 5);
    const IntegralPair ip(img);
    CHECK(ip.sum_at(1, 1) == 5);
    CHECK(ip.sqsum_at(1, 1) == 25);
}

TEST_CASE("rect_sum examples") {
    const IntegralPair ip(image_2x2());
    CHECK(rect_sum(ip, {0, 0, 2, 2}) == 10);
    CHECK(rect_sum(ip, {0, 0, 1, 1}) == 1);

    const IntegralPair ones(make_image(7, 5, 1));
    CHECK(rect_sum(ones, {2, 1, 4, 3}) == 4 * 3);
}

TEST_CASE("rect_sum rejects out-of-bounds rects") {
    const IntegralPair ip(image_2x2());
    CHECK_THROWS_AS(rect_sum(ip, {1, 1, 2, 1}), BoundsError);
    CHECK_THROWS_AS(rect_sum(ip, {-1, 0, 1, 1}), BoundsError);
    CHECK_THROWS_AS(rect_sum(ip, {0, 0, 0, 1}), BoundsError);
}

TEST_CASE("rect_sum equals the brute-force pixel sum exactly") {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const GrayImage img = oracles::random_image(rng);
        const IntegralPair ip(img);
        for (int k = 0; k < 4; ++k) {
            const Rect r = oracles::random_rect(rng, img.width, img.height);
            CHECK(rect_sum(ip, r) == oracles::brute_rect_sum(img, r));
        }
    }
}

TEST_CASE("rect_sum is additive over splits") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        GrayImage img = oracles::random_image(rng, 32);
        if (img.width < 2) img = oracles::random_image(rng, 32);
        if (img.width < 2) continue;
        const IntegralPair ip(img);
        Rect r = oracles::random_rect(rng, img.width, img.height);
        if (r.w < 2) {
            r.w = 2;
            r.x = std::min(r.x, img.width - 2);
        }
        const int cut = 1 + static_cast<int>(rng.below(r.w - 1));
        const Rect left{r.x, r.y, cut, r.h};
        const Rect right{r.x + cut, r.y, r.w - cut, r.h};
        CHECK(rect_sum(ip, left) + rect_sum(ip, right) == rect_sum(ip, r));
    }
}

TEST_CASE("1x1 rect sums reconstruct the image") {
    Rng rng(43);
    const GrayImage img = oracles::random_image(rng, 24);
    const IntegralPair ip(img);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            CHECK(rect_sum(ip, {x, y, 1, 1}) == img.at(x, y));
}

TEST_CASE("tables are monotone along rows and columns") {
    Rng rng(44);
    const GrayImage img = oracles::random_image(rng, 24);
    const IntegralPair ip(img);
    for (int y = 0; y <= img.height; ++y)
        for (int x = 1; x <= img.width; ++x) CHECK(ip.sum_at(x, y) >= ip.sum_at(x - 1, y));
    for (int x = 0; x <= img.width; ++x)
        for (int y = 1; y <= img.height; ++y) CHECK(ip.sqsum_at(x, y) >= ip.sqsum_at(x, y - 1));
}

TEST_CASE("window_stats on a constant window") {
    const IntegralPair ip(make_image(6, 6, 128));
    const WindowStats s = window_stats(ip, {1, 1, 4, 4});
    CHECK(s.mean == doctest::Approx(128.0));
    CHECK(s.variance == 0.0);
    CHECK(s.corrected_std() == 1.0);
}

TEST_CASE("window_stats of [0,2]") {
    GrayImage img = make_image(2, 1);
    img.at(1, 0) = 2;
    const IntegralPair ip(img);
    const WindowStats s = window_stats(ip, {0, 0, 2, 1});
    CHECK(s.mean == doctest::Approx(1.0));
    CHECK(s.variance == doctest::Approx(1.0));
}

TEST_CASE("window_stats of [[1,2],[3,4]]") {
    const IntegralPair ip(image_2x2());
    const WindowStats s = window_stats(ip, {0, 0, 2, 2});
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.variance == doctest::Approx(1.25));
}

TEST_CASE("window_stats matches the two-pass variance oracle") {
    Rng rng(45);
    for (int trial = 0; trial < 200; ++trial) {
        const GrayImage img = oracles::random_image(rng, 48);
        const IntegralPair ip(img);
        const Rect r = oracles::random_rect(rng, img.width, img.height);
        const WindowStats s = window_stats(ip, r);
        const auto expect = oracles::brute_mean_variance(img, r);
        CHECK(s.variance >= 0.0);
        CHECK(s.mean == doctest::Approx(expect.mean).epsilon(1e-12));
        CHECK(s.variance == doctest::Approx(expect.variance).epsilon(1e-9));
    }
}
