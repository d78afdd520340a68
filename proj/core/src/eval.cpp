#include "boostdet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "boostdet/error.hpp"
#include "boostdet/parallel.hpp"

namespace fs = std::filesystem;

namespace boostdet {

// ---- corpora ------------------------------------------------------------------

AnnotatedCorpus load_annotations(const std::string& annotations_path) {
    std::ifstream in(annotations_path);
    if (!in) throw DataError("cannot open annotations: " + annotations_path);
    AnnotatedCorpus corpus;
    corpus.root = fs::path(annotations_path).parent_path().string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string path;
        Rect r;
        if (!(ss >> path >> r.x >> r.y >> r.w >> r.h))
            throw DataError(annotations_path + ":" + std::to_string(line_no) +
                            ": expected 'path x y w h'");
        auto it = std::find_if(corpus.entries.begin(), corpus.entries.end(),
                               [&](const auto& e) { return e.path == path; });
        if (it == corpus.entries.end()) {
            corpus.entries.push_back({path, {r}});
        } else {
            it->truths.push_back(r);
        }
    }
    return corpus;
}

void save_annotations(const AnnotatedCorpus& corpus, const std::string& annotations_path) {
    std::ofstream out(annotations_path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write annotations: " + annotations_path);
    for (const auto& e : corpus.entries)
        for (const Rect& r : e.truths)
            out << e.path << " " << r.x << " " << r.y << " " << r.w << " " << r.h << "\n";
}

std::size_t LoadedCorpus::total_truths() const {
    std::size_t n = 0;
    for (const auto& item : items) n += item.truths.size();
    return n;
}

LoadedCorpus load_corpus(const AnnotatedCorpus& corpus) {
    LoadedCorpus loaded;
    for (const auto& e : corpus.entries) {
        LoadedCorpus::Item item;
        item.path = e.path;
        const fs::path full = corpus.root.empty() ? fs::path(e.path) : fs::path(corpus.root) / e.path;
        item.image = load_pnm(full.string());
        item.truths = e.truths;
        for (const Rect& r : item.truths)
            if (!item.image.contains(r))
                throw DataError(e.path + ": ground truth rect outside the image");
        loaded.items.push_back(std::move(item));
    }
    return loaded;
}

// ---- synthetic generators -------------------------------------------------------

namespace {

void fill_noise(GrayImage& img, const Rect& r, int lo, int hi, Rng& rng) {
    for (int y = r.y; y < r.bottom(); ++y)
        for (int x = r.x; x < r.right(); ++x)
            img.at(x, y) = static_cast<std::uint8_t>(rng.range(lo, hi));
}

// a bright plus sign filling the rect: horizontal and vertical bars roughly
// one third of the extent wide, jittered so no single feature separates the
// class perfectly
void draw_cross(GrayImage& img, const Rect& r, const CrossParams& p, Rng& rng) {
    auto jit = [&] { return p.jitter > 0 ? static_cast<int>(rng.range(-p.jitter, p.jitter)) : 0; };
    const int bw = std::max(2, r.w / 3 + jit());
    const int bh = std::max(2, r.h / 3 + jit());
    const int bx = std::clamp(r.x + (r.w - bw) / 2 + jit(), r.x, r.right() - bw);
    const int by = std::clamp(r.y + (r.h - bh) / 2 + jit(), r.y, r.bottom() - bh);
    for (int y = by; y < by + bh; ++y)
        for (int x = r.x; x < r.right(); ++x)
            img.at(x, y) = static_cast<std::uint8_t>(rng.range(p.arm_lo, p.arm_hi));
    for (int y = r.y; y < r.bottom(); ++y)
        for (int x = bx; x < bx + bw; ++x)
            img.at(x, y) = static_cast<std::uint8_t>(rng.range(p.arm_lo, p.arm_hi));
}

bool far_from_all(const Rect& r, const std::vector<Rect>& others, int margin) {
    for (const Rect& o : others) {
        const bool overlap_x = r.x < o.right() + margin && o.x < r.right() + margin;
        const bool overlap_y = r.y < o.bottom() + margin && o.y < r.bottom() + margin;
        if (overlap_x && overlap_y) return false;
    }
    return true;
}

// a cross with one arm half knocked out: the hardest non-target shape
void draw_t_shape(GrayImage& img, const Rect& r, const CrossParams& p, Rng& rng) {
    draw_cross(img, r, p, rng);
    const int side = static_cast<int>(rng.below(4));
    Rect cut;
    switch (side) {
        case 0: cut = {r.x, r.y, r.w, r.h / 3}; break;                       // top
        case 1: cut = {r.x, r.y + r.h - r.h / 3, r.w, r.h / 3}; break;       // bottom
        case 2: cut = {r.x, r.y, r.w / 3, r.h}; break;                       // left
        default: cut = {r.x + r.w - r.w / 3, r.y, r.w / 3, r.h}; break;      // right
    }
    if (cut.w >= 1 && cut.h >= 1) fill_noise(img, cut, p.bg_lo, p.bg_hi, rng);
}

// squares, lone bars and T-shapes: they share arm structure with a cross
// without being one
void place_distractors(GrayImage& img, const std::vector<Rect>& keep_clear, int count,
                       const CrossParams& p, Rng& rng) {
    std::vector<Rect> placed = keep_clear;
    for (int d = 0; d < count; ++d) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            const int kind = static_cast<int>(rng.below(4));
            const int size = static_cast<int>(rng.range(std::max(4, p.base / 2),
                                                        std::max(5, (3 * p.base) / 2)));
            int w = size, h = size;
            if (kind == 1) {  // horizontal bar
                h = std::max(2, size / 3);
            } else if (kind == 2) {  // vertical bar
                w = std::max(2, size / 3);
            }
            if (img.width <= w || img.height <= h) break;
            const Rect r{static_cast<int>(rng.below(img.width - w)),
                         static_cast<int>(rng.below(img.height - h)), w, h};
            if (!far_from_all(r, placed, 4)) continue;
            if (kind == 3) {
                draw_t_shape(img, r, p, rng);
            } else {
                fill_noise(img, r, p.arm_lo, p.arm_hi, rng);
            }
            placed.push_back(r);
            break;
        }
    }
}

}  // namespace

CrossCorpus gen_cross_corpus(int n_images, int targets_per_image, std::uint64_t seed,
                             const CrossParams& params) {
    if (n_images < 1 || targets_per_image < 0) throw ConfigError("invalid corpus size");
    CrossCorpus corpus;
    corpus.params = params;
    for (int i = 0; i < n_images; ++i) {
        Rng rng(split_seed(seed, 0xC0 + static_cast<std::uint64_t>(i)));
        GrayImage img = make_image(params.image_w, params.image_h);
        fill_noise(img, {0, 0, img.width, img.height}, params.bg_lo, params.bg_hi, rng);

        std::vector<Rect> truths;
        for (int t = 0; t < targets_per_image; ++t) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                const double s = rng.uniform(params.min_scale, params.max_scale);
                const int size = static_cast<int>(round_ties_even(params.base * s));
                if (img.width <= size || img.height <= size) continue;
                const Rect r{static_cast<int>(rng.below(img.width - size)),
                             static_cast<int>(rng.below(img.height - size)), size, size};
                if (!far_from_all(r, truths, 6)) continue;
                draw_cross(img, r, params, rng);
                truths.push_back(r);
                break;
            }
        }
        place_distractors(img, truths, params.distractors, params, rng);

        char name[64];
        std::snprintf(name, sizeof name, "images/img_%03d.pgm", i);
        corpus.names.emplace_back(name);
        corpus.images.push_back(std::move(img));
        corpus.truths.push_back(std::move(truths));
    }
    return corpus;
}

CrossTraining gen_cross_training(int n_faces, int n_nonface_images, std::uint64_t seed,
                                 const CrossParams& params) {
    CrossTraining out;
    for (int i = 0; i < n_faces; ++i) {
        Rng rng(split_seed(seed, 0xFA000 + static_cast<std::uint64_t>(i)));
        GrayImage img = make_image(params.base, params.base);
        fill_noise(img, {0, 0, img.width, img.height}, params.bg_lo, params.bg_hi, rng);
        draw_cross(img, {0, 0, params.base, params.base}, params, rng);
        out.faces.push_back(std::move(img));
    }
    for (int i = 0; i < n_nonface_images; ++i) {
        Rng rng(split_seed(seed, 0x0FF000 + static_cast<std::uint64_t>(i)));
        GrayImage img = make_image(params.image_w, params.image_h);
        fill_noise(img, {0, 0, img.width, img.height}, params.bg_lo, params.bg_hi, rng);
        place_distractors(img, {}, params.nonface_distractors, params, rng);
        out.nonface_images.push_back(std::move(img));
    }
    return out;
}

LoadedCorpus to_loaded_corpus(const CrossCorpus& c) {
    LoadedCorpus loaded;
    for (std::size_t i = 0; i < c.images.size(); ++i)
        loaded.items.push_back({c.names[i], c.images[i], c.truths[i]});
    return loaded;
}

void save_cross_corpus(const CrossCorpus& c, const std::string& dir) {
    fs::create_directories(fs::path(dir) / "images");
    AnnotatedCorpus ann;
    ann.root = dir;
    for (std::size_t i = 0; i < c.images.size(); ++i) {
        save_pgm(c.images[i], (fs::path(dir) / c.names[i]).string());
        ann.entries.push_back({c.names[i], c.truths[i]});
    }
    save_annotations(ann, (fs::path(dir) / "annotations.txt").string());
}

Dataset gen_two_gaussians(std::size_t n, double imbalance_ratio, std::uint64_t seed,
                          double separation) {
    if (n < 2 || !(imbalance_ratio >= 1.0)) throw ConfigError("invalid two-gaussians parameters");
    const std::size_t minority =
        static_cast<std::size_t>(std::ceil(static_cast<double>(n) / (imbalance_ratio + 1.0)));
    Rng rng(split_seed(seed, 0x26));
    Dataset data(2);
    data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool is_minority = i < minority;
        const double cx = is_minority ? separation : 0.0;
        const double cy = is_minority ? separation : 0.0;
        const double x[2] = {cx + rng.normal(), cy + rng.normal()};
        data.add(x, is_minority ? +1 : -1);
    }
    return data;
}

Dataset gen_two_moons(std::size_t n, double noise, std::uint64_t seed) {
    if (n < 2) throw ConfigError("two-moons needs n >= 2");
    Rng rng(split_seed(seed, 0x3A));
    Dataset data(2);
    data.reserve(n);
    const std::size_t half = n / 2;
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = pi * rng.uniform();
        double x[2];
        int label;
        if (i < half) {
            x[0] = std::cos(t);
            x[1] = std::sin(t);
            label = +1;
        } else {
            x[0] = 1.0 - std::cos(t);
            x[1] = 0.5 - std::sin(t);
            label = -1;
        }
        x[0] += noise * rng.normal();
        x[1] += noise * rng.normal();
        data.add(x, label);
    }
    return data;
}

// ---- ROC ----------------------------------------------------------------------

RocCache build_roc_cache(const CascadeModel& m, const LoadedCorpus& corpus,
                         const ScanConfig& cfg) {
    RocCache cache;
    cache.images.resize(corpus.items.size());
    parallel_for(corpus.items.size(), cfg.jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& item = corpus.items[i];
            ScanConfig inner = cfg;
            inner.jobs = 1;  // already parallel across images
            const auto scored = scan_scored(m, item.image, inner);
            std::vector<RawHit> raw;
            raw.reserve(scored.size());
            for (const auto& s : scored) raw.push_back({s.rect, s.scale, s.final_score});
            cache.images[i].groups = merge_hits(raw, cfg.merge_min_neighbors, cfg.merge_overlap,
                                                item.image.width, item.image.height);
            cache.images[i].truths = item.truths;
        }
    });
    cache.total_truths = corpus.total_truths();
    return cache;
}

MatchCounts count_at_threshold(const RocCache& cache, double threshold, double iou_threshold) {
    MatchCounts counts;
    for (const auto& img : cache.images) {
        std::vector<char> taken(img.truths.size(), 0);
        for (const Detection& g : img.groups) {  // already sorted by score desc
            if (!(g.score >= threshold)) continue;
            double best_iou = 0.0;
            std::size_t best = img.truths.size();
            for (std::size_t t = 0; t < img.truths.size(); ++t) {
                if (taken[t]) continue;
                const double iou = rect_iou(g.rect, img.truths[t]);
                if (iou >= iou_threshold && iou > best_iou) {
                    best_iou = iou;
                    best = t;
                }
            }
            if (best < img.truths.size()) {
                taken[best] = 1;
                ++counts.matched;
            } else {
                ++counts.false_detections;
            }
        }
    }
    return counts;
}

std::vector<double> natural_sweep(const RocCache& cache) {
    std::vector<double> sweep{std::numeric_limits<double>::infinity()};
    for (const auto& img : cache.images)
        for (const Detection& g : img.groups) sweep.push_back(g.score);
    sweep.push_back(-std::numeric_limits<double>::infinity());
    std::sort(sweep.begin(), sweep.end(), std::greater<>());
    sweep.erase(std::unique(sweep.begin(), sweep.end()), sweep.end());
    return sweep;
}

std::vector<RocPoint> roc_points(const RocCache& cache, std::vector<double> sweep,
                                 double iou_threshold) {
    if (sweep.empty()) throw ConfigError("roc sweep must not be empty");
    std::sort(sweep.begin(), sweep.end(), std::greater<>());
    sweep.erase(std::unique(sweep.begin(), sweep.end()), sweep.end());

    std::vector<RocPoint> points;
    points.reserve(sweep.size());
    for (const double theta : sweep) {
        const MatchCounts counts = count_at_threshold(cache, theta, iou_threshold);
        RocPoint p;
        p.threshold = theta;
        p.false_detections = static_cast<int>(counts.false_detections);
        p.detection_rate = cache.total_truths
                               ? static_cast<double>(counts.matched) / cache.total_truths
                               : 0.0;
        points.push_back(p);
    }
    return points;
}

std::vector<RocPoint> roc_curve(const CascadeModel& m, const LoadedCorpus& corpus,
                                const ScanConfig& cfg, std::vector<double> sweep,
                                double iou_threshold) {
    if (corpus.items.empty()) throw DataError("roc corpus is empty");
    return roc_points(build_roc_cache(m, corpus, cfg), std::move(sweep), iou_threshold);
}

std::string roc_csv(const std::vector<RocPoint>& points) {
    std::string out = "threshold,false_detections,detection_rate\n";
    char buf[96];
    for (const RocPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g\n", p.threshold, p.false_detections,
                      p.detection_rate);
        out += buf;
    }
    return out;
}

// ---- SVG ----------------------------------------------------------------------

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string roc_svg(const std::vector<std::pair<std::string, std::vector<RocPoint>>>& curves,
                    const std::string& title) {
    const int width = 640, height = 480;
    const double left = 64, right = 616, top = 48, bottom = 432;
    int max_fd = 1;
    for (const auto& [name, pts] : curves)
        for (const RocPoint& p : pts) max_fd = std::max(max_fd, p.false_detections);

    auto sx = [&](double fd) { return left + (right - left) * fd / max_fd; };
    auto sy = [&](double rate) { return bottom - (bottom - top) * rate; };

    std::string svg;
    char buf[256];
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
                  "font-size=\"15\">%s</text>\n",
                  title.c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  left, bottom, right, bottom);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  left, top, left, bottom);
    svg += buf;
    for (int i = 0; i <= 4; ++i) {
        const double rate = 0.25 * i;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-family=\"monospace\" "
                      "font-size=\"11\">%.2f</text>\n",
                      left - 6, sy(rate) + 4, rate);
        svg += buf;
        const int fd = max_fd * i / 4;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" "
                      "font-family=\"monospace\" font-size=\"11\">%d</text>\n",
                      sx(fd), bottom + 16, fd);
        svg += buf;
    }
    svg += "<text x=\"320\" y=\"462\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"12\">false detections</text>\n";
    svg += "<text x=\"18\" y=\"240\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"12\" transform=\"rotate(-90 18 240)\">detection rate</text>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& pts = curves[c].second;
        std::string poly;
        for (const RocPoint& p : pts) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(p.false_detections),
                          sy(p.detection_rate));
            poly += buf;
        }
        std::snprintf(buf, sizeof buf,
                      "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" "
                      "points=\"%s\"/>\n",
                      kPalette[c % 6], poly.c_str());
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" font-size=\"11\" "
                      "fill=\"%s\">%s</text>\n",
                      right - 140.0, top + 16.0 + 14.0 * c, kPalette[c % 6],
                      curves[c].first.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

// ---- error table ----------------------------------------------------------------

ErrorTable error_table(const std::vector<std::pair<std::string, const CascadeModel*>>& models,
                       const LoadedCorpus& corpus, const ScanConfig& cfg,
                       const std::vector<int>& fd_targets, double iou_threshold) {
    if (models.empty() || fd_targets.empty()) throw ConfigError("error table needs models and fd targets");
    ErrorTable table;
    table.fd_targets = fd_targets;
    for (const auto& [name, model] : models) {
        table.model_names.push_back(name);
        const RocCache cache = build_roc_cache(*model, corpus, cfg);
        const auto points = roc_points(cache, natural_sweep(cache), iou_threshold);
        std::vector<double> row;
        for (const int target : fd_targets) {
            // best operating point with false detections within the budget;
            // the reject-all endpoint guarantees one exists unless the curve
            // itself is empty, which gets the unreachable marker
            double best_rate = -1.0;
            for (const RocPoint& p : points)
                if (p.false_detections <= target) best_rate = std::max(best_rate, p.detection_rate);
            if (best_rate < 0.0) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());  // unreachable
            } else {
                row.push_back((1.0 - best_rate) * 100.0);
            }
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

std::string error_table_text(const ErrorTable& table) {
    std::size_t name_w = 8;
    for (const auto& n : table.model_names) name_w = std::max(name_w, n.size());
    std::string out = "error rate (%) by false-detection budget\n";
    char buf[64];
    out += std::string(name_w, ' ');
    for (const int fd : table.fd_targets) {
        std::snprintf(buf, sizeof buf, "  fd<=%-6d", fd);
        out += buf;
    }
    out += "\n";
    for (std::size_t r = 0; r < table.model_names.size(); ++r) {
        out += table.model_names[r];
        out += std::string(name_w - table.model_names[r].size(), ' ');
        for (const double cell : table.cells[r]) {
            if (std::isnan(cell)) {
                std::snprintf(buf, sizeof buf, "  %-10s", "n/a");
            } else {
                std::snprintf(buf, sizeof buf, "  %-10.2f", cell);
            }
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string error_table_csv(const ErrorTable& table) {
    std::string out = "model";
    char buf[64];
    for (const int fd : table.fd_targets) {
        std::snprintf(buf, sizeof buf, ",fd_%d", fd);
        out += buf;
    }
    out += "\n";
    for (std::size_t r = 0; r < table.model_names.size(); ++r) {
        out += table.model_names[r];
        for (const double cell : table.cells[r]) {
            if (std::isnan(cell)) {
                out += ",n/a";
            } else {
                std::snprintf(buf, sizeof buf, ",%.2f", cell);
                out += buf;
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace boostdet
