#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "boostdet/image.hpp"

namespace boostdet {

// Summed-area tables of an image and of its square, (width+1) x (height+1)
// with a zero top row and left column so the four-reference rectangle sum
// needs no branches at the image edges. Exact integer arithmetic: uint64
// holds 255 * 2^32 pixels (sum) and 255^2 * 2^32 (square sum) with room to
// spare. Immutable after construction and safe to share across threads.
class IntegralPair {
public:
    explicit IntegralPair(const GrayImage& img);

    int width() const { return width_; }
    int height() const { return height_; }

    // table reads, x in [0, width], y in [0, height]
    std::uint64_t sum_at(int x, int y) const { return sum_[idx(x, y)]; }
    std::uint64_t sqsum_at(int x, int y) const { return sqsum_[idx(x, y)]; }

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * (width_ + 1) + x;
    }
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint64_t> sum_;
    std::vector<std::uint64_t> sqsum_;
};

inline IntegralPair build_integral(const GrayImage& img) { return IntegralPair(img); }

// Sum of pixels inside r, exactly four table reads. Throws BoundsError for
// out-of-bounds rects.
std::uint64_t rect_sum(const IntegralPair& ip, const Rect& r);
std::uint64_t rect_sqsum(const IntegralPair& ip, const Rect& r);

struct WindowStats {
    double mean = 0.0;
    double variance = 0.0;  // population form, divisor = area

    // Lighting-correction divisor: sqrt(variance), or 1 for constant windows.
    double corrected_std() const { return variance > 0.0 ? std::sqrt(variance) : 1.0; }
};

WindowStats window_stats(const IntegralPair& ip, const Rect& r);

}  // namespace boostdet
