#include "boostdet/image.hpp"

#include <algorithm>
#include <fstream>

#include "boostdet/error.hpp"

namespace boostdet {

double rect_iou(const Rect& a, const Rect& b) {
    const int ix = std::max(a.x, b.x);
    const int iy = std::max(a.y, b.y);
    const int ix2 = std::min(a.right(), b.right());
    const int iy2 = std::min(a.bottom(), b.bottom());
    if (ix2 <= ix || iy2 <= iy) return 0.0;
    const double inter = static_cast<double>(ix2 - ix) * (iy2 - iy);
    const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

GrayImage make_image(int width, int height, std::uint8_t fill) {
    if (width < 1 || height < 1) throw DataError("image dimensions must be >= 1");
    GrayImage img;
    img.width = width;
    img.height = height;
    img.data.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

namespace {

struct PnmCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }
    std::uint8_t peek() const { return bytes[pos]; }

    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    }

    // whitespace runs, with "#" comments running to end of line
    void skip_separators() {
        while (!eof()) {
            if (is_space(peek())) {
                ++pos;
            } else if (peek() == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    unsigned read_uint(const char* what) {
        skip_separators();
        if (eof()) throw ParseError(std::string("missing ") + what, pos);
        if (peek() < '0' || peek() > '9')
            throw ParseError(std::string("expected unsigned integer for ") + what, pos);
        unsigned long long v = 0;
        while (!eof() && peek() >= '0' && peek() <= '9') {
            v = v * 10 + (peek() - '0');
            if (v > 1000000000ull) throw ParseError(std::string(what) + " out of range", pos);
            ++pos;
        }
        return static_cast<unsigned>(v);
    }
};

}  // namespace

GrayImage decode_pnm(std::span<const std::uint8_t> bytes) {
    PnmCursor cur{bytes};
    if (bytes.size() < 2) throw ParseError("not a PNM file: header too short", 0);
    if (bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw ParseError("not a PNM file: expected magic P5 or P6", 0);
    const bool color = bytes[1] == '6';
    cur.pos = 2;

    const unsigned width = cur.read_uint("width");
    const unsigned height = cur.read_uint("height");
    const std::size_t maxval_pos = (cur.skip_separators(), cur.pos);
    const unsigned maxval = cur.read_uint("maxval");
    if (width < 1 || height < 1) throw ParseError("image dimensions must be >= 1", maxval_pos);
    if (static_cast<unsigned long long>(width) * height > 100000000ull)
        throw ParseError("image implausibly large", maxval_pos);
    if (maxval > 255) throw ParseError("maxval " + std::to_string(maxval) + " exceeds 255", maxval_pos);
    if (maxval == 0) throw ParseError("maxval must be >= 1", maxval_pos);

    // exactly one whitespace byte between maxval and the payload
    if (cur.eof() || !PnmCursor::is_space(cur.peek()))
        throw ParseError("expected single whitespace before payload", cur.pos);
    ++cur.pos;

    const std::size_t pixel_count = static_cast<std::size_t>(width) * height;
    const std::size_t need = color ? pixel_count * 3 : pixel_count;
    const std::size_t have = bytes.size() - cur.pos;
    if (have < need)
        throw ParseError("payload truncated: need " + std::to_string(need) + " bytes, have " +
                             std::to_string(have),
                         cur.pos + have);

    GrayImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.data.resize(pixel_count);
    const std::uint8_t* p = bytes.data() + cur.pos;
    if (color) {
        for (std::size_t i = 0; i < pixel_count; ++i) {
            const unsigned r = p[3 * i], g = p[3 * i + 1], b = p[3 * i + 2];
            img.data[i] = static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
        }
    } else {
        std::copy(p, p + pixel_count, img.data.begin());
    }
    return img;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("short write: " + path);
}

GrayImage load_pnm(const std::string& path) {
    try {
        return decode_pnm(read_file_bytes(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.byte_offset);
    }
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.data.begin(), img.data.end());
    return out;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    const auto bytes = encode_pgm(img);
    write_file_bytes(path, bytes);
}

void save_ppm_annotated(const GrayImage& img, const std::vector<Rect>& boxes,
                        const std::string& path) {
    const std::string header =
        "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.data.size() * 3);
    for (const std::uint8_t v : img.data) {
        out.push_back(v);
        out.push_back(v);
        out.push_back(v);
    }
    const std::size_t base = header.size();
    auto paint = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
        const std::size_t off = base + 3 * (static_cast<std::size_t>(y) * img.width + x);
        out[off] = out[off + 1] = out[off + 2] = 255;
    };
    for (const Rect& r : boxes) {
        for (int x = r.x; x < r.right(); ++x) {
            paint(x, r.y);
            paint(x, r.bottom() - 1);
        }
        for (int y = r.y; y < r.bottom(); ++y) {
            paint(r.x, y);
            paint(r.right() - 1, y);
        }
    }
    write_file_bytes(path, out);
}

}  // namespace boostdet
