#include "boostdet/haar.hpp"

#include <cmath>
#include <cstring>

#include "boostdet/error.hpp"
#include "boostdet/rng.hpp"

namespace boostdet {

long long round_ties_even(double v) {
    const double f = std::floor(v);
    const double d = v - f;
    const long long base = static_cast<long long>(f);
    if (d > 0.5) return base + 1;
    if (d < 0.5) return base;
    return (base % 2 == 0) ? base : base + 1;
}

std::vector<SubRect> feature_subrects(const HaarFeature& f) {
    const Rect& a = f.anchor;
    switch (f.kind) {
        case HaarKind::TwoRectHorizontal: {
            const int hw = a.w / 2;
            return {{{a.x, a.y, hw, a.h}, +1}, {{a.x + hw, a.y, hw, a.h}, -1}};
        }
        case HaarKind::TwoRectVertical: {
            const int hh = a.h / 2;
            return {{{a.x, a.y, a.w, hh}, +1}, {{a.x, a.y + hh, a.w, hh}, -1}};
        }
        case HaarKind::ThreeRect: {
            const int tw = a.w / 3;
            return {{{a.x, a.y, tw, a.h}, +1},
                    {{a.x + tw, a.y, tw, a.h}, -2},
                    {{a.x + 2 * tw, a.y, tw, a.h}, +1}};
        }
        case HaarKind::FourRect: {
            const int hw = a.w / 2;
            const int hh = a.h / 2;
            return {{{a.x, a.y, hw, hh}, +1},
                    {{a.x + hw, a.y, hw, hh}, -1},
                    {{a.x, a.y + hh, hw, hh}, -1},
                    {{a.x + hw, a.y + hh, hw, hh}, +1}};
        }
    }
    throw DataError("unknown feature kind");
}

namespace {

struct KindRule {
    HaarKind kind;
    int w_div;
    int h_div;
};

constexpr KindRule kKindRules[] = {
    {HaarKind::TwoRectHorizontal, 2, 1},
    {HaarKind::TwoRectVertical, 1, 2},
    {HaarKind::ThreeRect, 3, 1},
    {HaarKind::FourRect, 2, 2},
};

}  // namespace

FeaturePool enumerate_pool(int base) {
    if (base < 1) throw ConfigError("base window must be >= 1");
    FeaturePool pool;
    pool.base = base;
    for (const KindRule& rule : kKindRules) {
        for (int y = 0; y < base; ++y) {
            for (int x = 0; x < base; ++x) {
                for (int h = rule.h_div; y + h <= base; h += rule.h_div) {
                    for (int w = rule.w_div; x + w <= base; w += rule.w_div) {
                        pool.features.push_back({rule.kind, {x, y, w, h}});
                    }
                }
            }
        }
    }
    return pool;
}

std::uint64_t pool_digest(const FeaturePool& pool) {
    std::uint64_t h = fnv1a64(nullptr, 0);
    auto mix = [&](std::int32_t v) {
        unsigned char buf[4];
        buf[0] = static_cast<unsigned char>(v & 0xff);
        buf[1] = static_cast<unsigned char>((v >> 8) & 0xff);
        buf[2] = static_cast<unsigned char>((v >> 16) & 0xff);
        buf[3] = static_cast<unsigned char>((v >> 24) & 0xff);
        h = fnv1a64(buf, 4, h);
    };
    mix(pool.base);
    for (const HaarFeature& f : pool.features) {
        mix(static_cast<std::int32_t>(f.kind));
        mix(f.anchor.x);
        mix(f.anchor.y);
        mix(f.anchor.w);
        mix(f.anchor.h);
    }
    return h;
}

ScaledFeatureLUT::ScaledFeatureLUT(const FeaturePool& pool, double scale) : scale_(scale) {
    if (!(scale > 0.0)) throw ConfigError("LUT scale must be > 0");
    window_ = static_cast<int>(round_ties_even(pool.base * scale));
    if (window_ < 1) window_ = 1;
    entries_.resize(pool.size());
    for (std::size_t id = 0; id < pool.size(); ++id) {
        const auto subs = feature_subrects(pool.features[id]);
        ScaledFeature& e = entries_[id];
        e.count = static_cast<int>(subs.size());
        for (std::size_t k = 0; k < subs.size(); ++k) {
            const Rect& r = subs[k].rect;
            long long x1 = round_ties_even(r.x * scale);
            long long y1 = round_ties_even(r.y * scale);
            long long x2 = round_ties_even((r.x + r.w) * scale);
            long long y2 = round_ties_even((r.y + r.h) * scale);
            x1 = std::max(0ll, std::min<long long>(x1, window_));
            y1 = std::max(0ll, std::min<long long>(y1, window_));
            x2 = std::max(x1, std::min<long long>(x2, window_));
            y2 = std::max(y1, std::min<long long>(y2, window_));
            ScaledSubRect& s = e.sub[k];
            s.rect = {static_cast<int>(x1), static_cast<int>(y1), static_cast<int>(x2 - x1),
                      static_cast<int>(y2 - y1)};
            s.weight = subs[k].weight;
            s.area = static_cast<double>(s.rect.w) * s.rect.h;
            if (s.area <= 0.0) {
                s.area = 0.0;
                e.degraded = true;
            }
        }
    }
}

double eval_feature(const ScaledFeatureLUT& lut, std::size_t id, const IntegralPair& ip,
                    int wx, int wy, double window_std) {
    const ScaledFeature& e = lut.entry(id);
    double value = 0.0;
    for (int k = 0; k < e.count; ++k) {
        const ScaledSubRect& s = e.sub[k];
        if (s.area == 0.0) continue;  // degenerate at this scale
        const Rect r{wx + s.rect.x, wy + s.rect.y, s.rect.w, s.rect.h};
        value += s.weight * (static_cast<double>(rect_sum(ip, r)) / s.area);
    }
    return value / window_std;
}

}  // namespace boostdet
