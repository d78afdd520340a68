#include "boostdet/integral.hpp"

#include <string>

#include "boostdet/error.hpp"

namespace boostdet {

IntegralPair::IntegralPair(const GrayImage& img) : width_(img.width), height_(img.height) {
    if (img.width < 1 || img.height < 1 ||
        img.data.size() != static_cast<std::size_t>(img.width) * img.height)
        throw DataError("invalid image: data length does not match dimensions");
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    sum_.assign(stride * (height_ + 1), 0);
    sqsum_.assign(stride * (height_ + 1), 0);
    for (int y = 0; y < height_; ++y) {
        std::uint64_t row = 0;
        std::uint64_t row_sq = 0;
        const std::uint8_t* src = img.data.data() + static_cast<std::size_t>(y) * width_;
        std::uint64_t* dst = sum_.data() + (y + 1) * stride;
        std::uint64_t* dst_sq = sqsum_.data() + (y + 1) * stride;
        const std::uint64_t* up = sum_.data() + y * stride;
        const std::uint64_t* up_sq = sqsum_.data() + y * stride;
        for (int x = 0; x < width_; ++x) {
            const std::uint64_t v = src[x];
            row += v;
            row_sq += v * v;
            dst[x + 1] = row + up[x + 1];
            dst_sq[x + 1] = row_sq + up_sq[x + 1];
        }
    }
}

namespace {

void check_rect(const IntegralPair& ip, const Rect& r) {
    if (r.x < 0 || r.y < 0 || r.w < 1 || r.h < 1 || r.right() > ip.width() ||
        r.bottom() > ip.height())
        throw BoundsError("rect (" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
                          std::to_string(r.w) + "," + std::to_string(r.h) +
                          ") out of bounds for " + std::to_string(ip.width()) + "x" +
                          std::to_string(ip.height()) + " image");
}

}  // namespace

std::uint64_t rect_sum(const IntegralPair& ip, const Rect& r) {
    check_rect(ip, r);
    return ip.sum_at(r.right(), r.bottom()) + ip.sum_at(r.x, r.y) -
           ip.sum_at(r.right(), r.y) - ip.sum_at(r.x, r.bottom());
}

std::uint64_t rect_sqsum(const IntegralPair& ip, const Rect& r) {
    check_rect(ip, r);
    return ip.sqsum_at(r.right(), r.bottom()) + ip.sqsum_at(r.x, r.y) -
           ip.sqsum_at(r.right(), r.y) - ip.sqsum_at(r.x, r.bottom());
}

WindowStats window_stats(const IntegralPair& ip, const Rect& r) {
    const double area = static_cast<double>(r.area());
    const double s = static_cast<double>(rect_sum(ip, r));
    const double q = static_cast<double>(rect_sqsum(ip, r));
    WindowStats out;
    out.mean = s / area;
    const double v = q / area - out.mean * out.mean;
    out.variance = v > 0.0 ? v : 0.0;
    return out;
}

}  // namespace boostdet
