#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "boostdet/boost_svm.hpp"
#include "boostdet/haar.hpp"

namespace boostdet {

struct StageGoals {
    double d_min = 0.995;  // minimum stage detection rate on held-out faces
    double f_max = 0.5;    // maximum stage false-positive rate on its negatives
};

enum class CascadeLearner { Stumps = 0, Svm = 1, Tree = 2, Net = 3 };

const char* learner_name(CascadeLearner l);
CascadeLearner learner_from_name(const std::string& name);

struct CascadeLimits {
    int max_stages = 3;
    int rounds_per_stage = 16;      // initial boosting rounds per stage
    std::vector<int> stage_rounds;  // per-stage override, e.g. {4, 8, 16};
                                    // later stages reuse the last entry
    int max_rounds_per_stage = 48;  // growth cap while chasing f_max
    int round_growth = 8;
    double target_fp = 0.0;  // stop appending stages once the cumulative
                             // false-positive estimate drops to this
    double holdout_fraction = 0.3;
    std::size_t negatives_per_stage = 0;     // 0 -> 10x training faces
    std::uint64_t mining_budget_factor = 500;  // attempts allowed per needed negative
    std::uint64_t seed = 1;
    int jobs = 1;
    BoostSvmConfig svm;  // knobs for the Svm learner (seed is overridden)
    int tree_depth = 3;
    int net_hidden = 8;
    int net_epochs = 120;
};

struct StageMeta {
    int rounds = 0;
    double theta = 0.0;
    double holdout_detection_rate = 0.0;
    double fp_rate = 0.0;
    bool degenerate = false;  // theta pushed past every face score (d_min = 0)
};

struct CascadeModel {
    int base = 0;
    std::uint64_t pool_digest = 0;
    std::vector<StrongClassifier> stages;  // each with its own theta

    // training metadata, serialized with the model for audit
    std::string learner;
    std::uint64_t seed = 0;
    std::vector<StageMeta> stage_meta;
    std::vector<std::string> warnings;
    double cumulative_fp_estimate = 1.0;
    std::vector<SvmRoundLog> round_log;  // per stage attempts, stage encoded in t
};

struct Detection {
    Rect rect;
    double scale = 1.0;
    double score = 0.0;
};

struct ScanConfig {
    double scale_factor = 1.25;
    double step_fraction = 0.05;  // of the current window size, min 1 px
    int min_window = 0;           // 0 -> base
    int merge_min_neighbors = 2;
    double merge_overlap = 0.3;  // IoU for grouping raw hits
    int jobs = 1;
};

// Builds and memoizes one LUT per distinct window size.
class LutCache {
public:
    LutCache(const FeaturePool& pool, int base) : pool_(&pool), base_(base) {}
    const ScaledFeatureLUT& for_window(int window_px);

private:
    const FeaturePool* pool_;
    int base_;
    std::map<int, ScaledFeatureLUT> luts_;
};

struct ClassifyOutcome {
    bool accepted = false;
    double score = 0.0;  // last evaluated stage's score
    int stages_run = 0;
};

// Short-circuit evaluation: stages run in order, the first stage whose score
// falls below its theta rejects. The LUT must match the window size.
ClassifyOutcome cascade_classify(const CascadeModel& m, const IntegralPair& ip,
                                 const Rect& window, const ScaledFeatureLUT& lut);

// Appends stages until the cumulative false-positive estimate reaches
// limits.target_fp or limits.max_stages is hit. Faces must already be
// cropped to base x base; nonface sources are mined for negatives that pass
// the stages built so far.
CascadeModel train_cascade(const std::vector<GrayImage>& faces,
                           const std::vector<GrayImage>& nonface_sources,
                           const StageGoals& goals, CascadeLearner learner,
                           const CascadeLimits& limits, int base);

struct DetectResult {
    std::vector<Detection> detections;
    std::string notice;  // set when the image is smaller than the base window
};

// Multi-scale sliding-window scan. Features are rescaled per window size
// (one LUT per scale) instead of resampling the image; every window is
// lighting-corrected by its own standard deviation. Raw hits are grouped by
// IoU >= merge_overlap, groups smaller than merge_min_neighbors are dropped,
// and each surviving group emits its average rect with its best score.
DetectResult detect(const CascadeModel& m, const GrayImage& img, const ScanConfig& cfg);

// Like detect, but the final stage's theta is ignored and every window that
// clears the earlier stages is returned with its final-stage score. This is
// the scan the ROC machinery caches and re-thresholds.
struct ScoredWindow {
    Rect rect;
    double scale = 1.0;
    double final_score = 0.0;
};
std::vector<ScoredWindow> scan_scored(const CascadeModel& m, const GrayImage& img,
                                      const ScanConfig& cfg);

struct RawHit {
    Rect rect;
    double scale = 1.0;
    double score = 0.0;
};
std::vector<Detection> merge_hits(const std::vector<RawHit>& hits, int min_neighbors,
                                  double overlap, int img_w, int img_h);

std::string detections_csv(
    const std::vector<std::pair<std::string, std::vector<Detection>>>& per_image);

}  // namespace boostdet
