#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace boostdet {

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    long long area() const { return static_cast<long long>(w) * h; }
    int right() const { return x + w; }
    int bottom() const { return y + h; }
    bool operator==(const Rect&) const = default;
};

double rect_iou(const Rect& a, const Rect& b);

// 8-bit grayscale, row major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    bool contains(const Rect& r) const {
        return r.x >= 0 && r.y >= 0 && r.w >= 1 && r.h >= 1 && r.right() <= width &&
               r.bottom() <= height;
    }
};

GrayImage make_image(int width, int height, std::uint8_t fill = 0);

// Binary PGM ("P5") or PPM ("P6"), maxval <= 255. "#" comment lines are
// accepted in the header. PPM pixels are converted to luma with fixed
// integer weights, round half up: (299*R + 587*G + 114*B + 500) / 1000.
// Malformed input throws ParseError naming the byte offset.
GrayImage decode_pnm(std::span<const std::uint8_t> bytes);
GrayImage load_pnm(const std::string& path);

std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
void save_pgm(const GrayImage& img, const std::string& path);

// Writes a PPM copy of img with 1-px box borders at intensity 255.
void save_ppm_annotated(const GrayImage& img, const std::vector<Rect>& boxes,
                        const std::string& path);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace boostdet
