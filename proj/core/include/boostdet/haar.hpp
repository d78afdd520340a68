#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "boostdet/data.hpp"
#include "boostdet/integral.hpp"

namespace boostdet {

enum class HaarKind : std::uint8_t {
    TwoRectHorizontal = 0,
    TwoRectVertical = 1,
    ThreeRect = 2,
    FourRect = 3,
};

// A rectangle feature inside the base window. The anchor is the bounding
// box; sub-rectangles derive from the kind. The value is a weighted sum of
// per-pixel means, each sub-rectangle normalised by its own area; grey
// weights are positive, white negative, and every feature's weights sum to
// zero so a constant window evaluates to exactly 0 (the three-rect middle
// strip therefore counts twice):
//
//   TwoRectHorizontal    TwoRectVertical    ThreeRect         FourRect
//   +----+----+          +---------+        +---+---+---+     +----+----+
//   |####|    |          |#########|        |###|   |###|     |####|    |
//   |####|    |          +---------+        |###|   |###|     +----+----+
//   +----+----+          |         |        |###|   |###|     |    |####|
//   grey=left +1         +---------+        +---+---+---+     +----+----+
//   white=right -1       grey=top +1        grey=outer +1     grey=TL,BR +1
//                        white=bottom -1    white=middle -2   white=TR,BL -1
//
// Divisibility: anchor.w % 2 == 0 for TwoRectHorizontal and FourRect,
// anchor.w % 3 == 0 for ThreeRect, anchor.h % 2 == 0 for TwoRectVertical
// and FourRect.
struct HaarFeature {
    HaarKind kind = HaarKind::TwoRectHorizontal;
    Rect anchor;

    bool operator==(const HaarFeature&) const = default;
};

struct SubRect {
    Rect rect;
    int weight = +1;  // positive grey, negative white; sums to 0 per feature
};

// The kind-specific decomposition (2, 2, 3 or 4 sub-rectangles).
std::vector<SubRect> feature_subrects(const HaarFeature& f);

// Exhaustive feature pool over a base x base window. Enumeration is
// deterministic: kind-major, then anchor y, x, h, w ascending; feature IDs
// are indices into `features`.
struct FeaturePool {
    int base = 0;
    std::vector<HaarFeature> features;

    std::size_t size() const { return features.size(); }
};

FeaturePool enumerate_pool(int base);

// Checksum binding serialized models to the pool they index into.
std::uint64_t pool_digest(const FeaturePool& pool);

// One feature's sub-rectangles rescaled for a window of edge `window()`,
// coordinates relative to the window's top-left. Edges are rounded to
// nearest with ties to even, so sub-rectangles that share an edge in the
// base window still share it after rescaling. `area` is the true w*h of the
// rescaled rect; 0 marks a sub-rectangle that degenerated to nothing at
// this scale (its contribution evaluates as 0 and the entry is flagged).
struct ScaledSubRect {
    Rect rect;
    int weight = +1;
    double area = 0.0;
};

struct ScaledFeature {
    std::array<ScaledSubRect, 4> sub{};
    int count = 0;
    bool degraded = false;
};

class ScaledFeatureLUT {
public:
    ScaledFeatureLUT(const FeaturePool& pool, double scale);

    double scale() const { return scale_; }
    int window() const { return window_; }
    std::size_t size() const { return entries_.size(); }
    const ScaledFeature& entry(std::size_t id) const { return entries_[id]; }

private:
    double scale_ = 1.0;
    int window_ = 0;
    std::vector<ScaledFeature> entries_;
};

inline ScaledFeatureLUT build_lut(const FeaturePool& pool, double scale) {
    return ScaledFeatureLUT(pool, scale);
}

// Feature value over the window whose top-left is (wx, wy) and whose edge is
// lut.window(): sum of grey-rect means minus sum of white-rect means, then
// divided by window_std (callers pass WindowStats::corrected_std()).
double eval_feature(const ScaledFeatureLUT& lut, std::size_t id, const IntegralPair& ip,
                    int wx, int wy, double window_std);

// Lazy per-window feature accessor used while scanning.
class WindowView final : public FeatureView {
public:
    WindowView(const ScaledFeatureLUT& lut, const IntegralPair& ip, int wx, int wy,
               double window_std)
        : lut_(&lut), ip_(&ip), wx_(wx), wy_(wy), std_(window_std) {}

    double operator[](std::size_t feature) const override {
        return eval_feature(*lut_, feature, *ip_, wx_, wy_, std_);
    }
    std::size_t dim() const override { return lut_->size(); }

private:
    const ScaledFeatureLUT* lut_;
    const IntegralPair* ip_;
    int wx_;
    int wy_;
    double std_;
};

// round to nearest, ties to even; independent of the FPU rounding mode
long long round_ties_even(double v);

}  // namespace boostdet
