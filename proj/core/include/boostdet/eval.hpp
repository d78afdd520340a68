#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boostdet/cascade.hpp"

namespace boostdet {

// ---- corpora ------------------------------------------------------------------

// Annotation file: one line per face, "relative/path.pgm x y w h", LF endings.
struct AnnotatedCorpus {
    struct Entry {
        std::string path;  // relative to root
        std::vector<Rect> truths;
    };
    std::string root;
    std::vector<Entry> entries;
};

AnnotatedCorpus load_annotations(const std::string& annotations_path);
void save_annotations(const AnnotatedCorpus& corpus, const std::string& annotations_path);

// Corpus with pixels in memory, ready to scan. Validates that every ground
// truth rect lies inside its image.
struct LoadedCorpus {
    struct Item {
        std::string path;
        GrayImage image;
        std::vector<Rect> truths;
    };
    std::vector<Item> items;

    std::size_t total_truths() const;
};

LoadedCorpus load_corpus(const AnnotatedCorpus& corpus);

// ---- synthetic generators ------------------------------------------------------

// Desk-scale stand-ins for the face corpora: bright plus-shaped targets on
// noisy backgrounds, plus tabular two-class sets for the boosting
// experiments. Everything is a pure function of its seed.
struct CrossParams {
    int base = 12;  // target edge at scale 1; faces are base x base windows
    int image_w = 96;
    int image_h = 96;
    double min_scale = 1.0;
    double max_scale = 2.0;
    int bg_lo = 0, bg_hi = 110;       // background noise intensities
    int arm_lo = 140, arm_hi = 255;   // cross arm intensities
    int jitter = 1;                   // arm position/thickness jitter in pixels
    int distractors = 3;              // squares, lone bars and T-shapes per corpus
                                      // image, placed clear of every target
    int nonface_distractors = 10;     // distractor density in training backgrounds
};

struct CrossCorpus {
    CrossParams params;
    std::vector<std::string> names;
    std::vector<GrayImage> images;
    std::vector<std::vector<Rect>> truths;
};

CrossCorpus gen_cross_corpus(int n_images, int targets_per_image, std::uint64_t seed,
                             const CrossParams& params = {});

struct CrossTraining {
    std::vector<GrayImage> faces;           // base x base cross windows
    std::vector<GrayImage> nonface_images;  // noise + distractors, no crosses
};

CrossTraining gen_cross_training(int n_faces, int n_nonface_images, std::uint64_t seed,
                                 const CrossParams& params = {});

LoadedCorpus to_loaded_corpus(const CrossCorpus& c);
// writes dir/images/*.pgm and dir/annotations.txt
void save_cross_corpus(const CrossCorpus& c, const std::string& dir);

// ratio r: minority (+1) count = ceil(n / (r + 1)); majority (-1) centered at
// the origin, minority offset, unit variance
Dataset gen_two_gaussians(std::size_t n, double imbalance_ratio, std::uint64_t seed,
                          double separation = 2.2);
Dataset gen_two_moons(std::size_t n, double noise, std::uint64_t seed);

// ---- ROC and error tables -------------------------------------------------------

struct RocPoint {
    int false_detections = 0;
    double detection_rate = 0.0;
    double threshold = 0.0;
};

// Cached scan results: per image, the merged candidate groups with their
// final-stage scores (theta of the last stage ignored during the scan).
// Sweeping a threshold is then a pure fold over these groups.
struct RocCache {
    struct Image {
        std::vector<Detection> groups;  // sorted by score descending
        std::vector<Rect> truths;
    };
    std::vector<Image> images;
    std::size_t total_truths = 0;
};

RocCache build_roc_cache(const CascadeModel& m, const LoadedCorpus& corpus,
                         const ScanConfig& cfg);

// matched truths and false detections when only groups with
// score >= threshold count; greedy matching by score, each truth matched at
// most once, IoU >= iou_threshold
struct MatchCounts {
    std::size_t matched = 0;
    std::size_t false_detections = 0;
};
MatchCounts count_at_threshold(const RocCache& cache, double threshold, double iou_threshold);

// One point per sweep value, sorted by threshold descending. +inf and -inf
// are valid sweep entries (reject-all / accept-all endpoints).
std::vector<RocPoint> roc_points(const RocCache& cache, std::vector<double> sweep,
                                 double iou_threshold = 0.5);
std::vector<RocPoint> roc_curve(const CascadeModel& m, const LoadedCorpus& corpus,
                                const ScanConfig& cfg, std::vector<double> sweep,
                                double iou_threshold = 0.5);

// every achievable operating point: +inf, each distinct group score, -inf
std::vector<double> natural_sweep(const RocCache& cache);

std::string roc_csv(const std::vector<RocPoint>& points);
std::string roc_svg(const std::vector<std::pair<std::string, std::vector<RocPoint>>>& curves,
                    const std::string& title);

// Error-rate comparison: rows = models, columns = false-detection targets,
// cell = (1 - detection_rate) * 100 at the largest operating point with
// false_detections <= target. A model whose curve never reaches the target
// count gets an unreachable cell (NaN).
struct ErrorTable {
    std::vector<std::string> model_names;
    std::vector<int> fd_targets;
    std::vector<std::vector<double>> cells;  // [model][target], NaN = unreachable
};

ErrorTable error_table(const std::vector<std::pair<std::string, const CascadeModel*>>& models,
                       const LoadedCorpus& corpus, const ScanConfig& cfg,
                       const std::vector<int>& fd_targets, double iou_threshold = 0.5);

std::string error_table_text(const ErrorTable& table);
std::string error_table_csv(const ErrorTable& table);

}  // namespace boostdet
