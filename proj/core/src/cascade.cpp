#include "boostdet/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>

#include "boostdet/error.hpp"
#include "boostdet/parallel.hpp"

namespace boostdet {

const char* learner_name(CascadeLearner l) {
    switch (l) {
        case CascadeLearner::Stumps: return "stump";
        case CascadeLearner::Svm: return "svm";
        case CascadeLearner::Tree: return "tree";
        case CascadeLearner::Net: return "net";
    }
    return "unknown";
}

CascadeLearner learner_from_name(const std::string& name) {
    if (name == "stump" || name == "stumps") return CascadeLearner::Stumps;
    if (name == "svm") return CascadeLearner::Svm;
    if (name == "tree") return CascadeLearner::Tree;
    if (name == "net") return CascadeLearner::Net;
    throw ConfigError("unknown learner '" + name + "' (expected svm|stump|tree|net)");
}

const ScaledFeatureLUT& LutCache::for_window(int window_px) {
    auto it = luts_.find(window_px);
    if (it == luts_.end()) {
        const double scale = static_cast<double>(window_px) / base_;
        it = luts_.emplace(window_px, ScaledFeatureLUT(*pool_, scale)).first;
    }
    return it->second;
}

ClassifyOutcome cascade_classify(const CascadeModel& m, const IntegralPair& ip,
                                 const Rect& window, const ScaledFeatureLUT& lut) {
    if (m.stages.empty()) throw DataError("cascade model has no stages");
    if (window.w != window.h || lut.window() != window.w)
        throw BoundsError("no LUT for window size " + std::to_string(window.w));
    const double std_dev = window_stats(ip, window).corrected_std();
    const WindowView view(lut, ip, window.x, window.y, std_dev);

    ClassifyOutcome out;
    for (const StrongClassifier& stage : m.stages) {
        ++out.stages_run;
        out.score = strong_score(stage, view);
        if (out.score < stage.theta) return out;  // rejected here, rest skipped
    }
    out.accepted = true;
    return out;
}

// ---- scanning ----------------------------------------------------------------

namespace {

std::vector<int> scan_window_sizes(int base, int img_w, int img_h, const ScanConfig& cfg) {
    std::vector<int> sizes;
    const int limit = std::min(img_w, img_h);
    const int min_window = std::max(base, cfg.min_window);
    double scale = 1.0;
    while (true) {
        const int win = static_cast<int>(round_ties_even(base * scale));
        if (win > limit) break;
        if (win >= min_window && (sizes.empty() || sizes.back() != win)) sizes.push_back(win);
        scale *= cfg.scale_factor;
    }
    return sizes;
}

// single-scale pass shared by detect and scan_scored
template <typename Visit>
void scan_one_size(const CascadeModel& m, const IntegralPair& ip, const ScaledFeatureLUT& lut,
                   int win, const ScanConfig& cfg, Visit&& visit) {
    const int stride = std::max(1, static_cast<int>(std::llround(cfg.step_fraction * win)));
    for (int y = 0; y + win <= ip.height(); y += stride)
        for (int x = 0; x + win <= ip.width(); x += stride) visit(Rect{x, y, win, win});
}

}  // namespace

DetectResult detect(const CascadeModel& m, const GrayImage& img, const ScanConfig& cfg) {
    DetectResult out;
    if (m.stages.empty()) throw DataError("cascade model has no stages");
    if (img.width < m.base || img.height < m.base) {
        out.notice = "image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                     " smaller than base window " + std::to_string(m.base);
        return out;
    }
    const FeaturePool pool = enumerate_pool(m.base);
    LutCache luts(pool, m.base);
    const IntegralPair ip(img);
    const auto sizes = scan_window_sizes(m.base, img.width, img.height, cfg);
    for (const int win : sizes) luts.for_window(win);

    std::vector<std::vector<RawHit>> per_size(sizes.size());
    parallel_for(sizes.size(), cfg.jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const int win = sizes[k];
            const ScaledFeatureLUT& lut = luts.for_window(win);
            scan_one_size(m, ip, lut, win, cfg, [&](const Rect& r) {
                const ClassifyOutcome res = cascade_classify(m, ip, r, lut);
                if (res.accepted)
                    per_size[k].push_back({r, static_cast<double>(win) / m.base, res.score});
            });
        }
    });

    std::vector<RawHit> raw;
    for (const auto& v : per_size) raw.insert(raw.end(), v.begin(), v.end());
    out.detections = merge_hits(raw, cfg.merge_min_neighbors, cfg.merge_overlap, img.width,
                                img.height);
    return out;
}

std::vector<ScoredWindow> scan_scored(const CascadeModel& m, const GrayImage& img,
                                      const ScanConfig& cfg) {
    if (m.stages.empty()) throw DataError("cascade model has no stages");
    std::vector<ScoredWindow> out;
    if (img.width < m.base || img.height < m.base) return out;

    const FeaturePool pool = enumerate_pool(m.base);
    LutCache luts(pool, m.base);
    const IntegralPair ip(img);
    const auto sizes = scan_window_sizes(m.base, img.width, img.height, cfg);
    for (const int win : sizes) luts.for_window(win);
    const std::size_t last = m.stages.size() - 1;

    std::vector<std::vector<ScoredWindow>> per_size(sizes.size());
    parallel_for(sizes.size(), cfg.jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const int win = sizes[k];
            const ScaledFeatureLUT& lut = luts.for_window(win);
            scan_one_size(m, ip, lut, win, cfg, [&](const Rect& r) {
                const double std_dev = window_stats(ip, r).corrected_std();
                const WindowView view(lut, ip, r.x, r.y, std_dev);
                for (std::size_t s = 0; s < last; ++s)
                    if (strong_score(m.stages[s], view) < m.stages[s].theta) return;
                per_size[k].push_back(
                    {r, static_cast<double>(win) / m.base, strong_score(m.stages[last], view)});
            });
        }
    });
    for (const auto& v : per_size) out.insert(out.end(), v.begin(), v.end());
    return out;
}

// Greedy seeded grouping: the best-scoring unconsumed hit opens a group and
// absorbs every hit overlapping it. Group extent stays anchored to the seed,
// so dense hit fields cannot chain into one image-wide blob the way a
// transitive-closure merge would.
std::vector<Detection> merge_hits(const std::vector<RawHit>& hits, int min_neighbors,
                                  double overlap, int img_w, int img_h) {
    const std::size_t n = hits.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (hits[a].score != hits[b].score) return hits[a].score > hits[b].score;
        if (hits[a].rect.y != hits[b].rect.y) return hits[a].rect.y < hits[b].rect.y;
        if (hits[a].rect.x != hits[b].rect.x) return hits[a].rect.x < hits[b].rect.x;
        return hits[a].rect.w < hits[b].rect.w;
    });

    std::vector<char> consumed(n, 0);
    std::vector<Detection> out;
    for (const std::uint32_t seed : order) {
        if (consumed[seed]) continue;
        consumed[seed] = 1;
        double x = hits[seed].rect.x, y = hits[seed].rect.y;
        double w = hits[seed].rect.w, h = hits[seed].rect.h;
        double scale = hits[seed].scale;
        int count = 1;
        for (const std::uint32_t cand : order) {
            if (consumed[cand]) continue;
            if (rect_iou(hits[cand].rect, hits[seed].rect) < overlap) continue;
            consumed[cand] = 1;
            x += hits[cand].rect.x;
            y += hits[cand].rect.y;
            w += hits[cand].rect.w;
            h += hits[cand].rect.h;
            scale += hits[cand].scale;
            ++count;
        }
        if (count < min_neighbors) continue;
        const double inv = 1.0 / count;
        Rect r{static_cast<int>(std::llround(x * inv)), static_cast<int>(std::llround(y * inv)),
               static_cast<int>(std::llround(w * inv)), static_cast<int>(std::llround(h * inv))};
        r.w = std::max(1, std::min(r.w, img_w));
        r.h = std::max(1, std::min(r.h, img_h));
        r.x = std::max(0, std::min(r.x, img_w - r.w));
        r.y = std::max(0, std::min(r.y, img_h - r.h));
        out.push_back({r, scale * inv, hits[seed].score});
    }
    return out;  // seed order is already score-descending
}

std::string detections_csv(
    const std::vector<std::pair<std::string, std::vector<Detection>>>& per_image) {
    std::string out = "path,x,y,w,h,score\n";
    char buf[128];
    for (const auto& [path, dets] : per_image)
        for (const Detection& d : dets) {
            std::snprintf(buf, sizeof buf, ",%d,%d,%d,%d,%.17g\n", d.rect.x, d.rect.y, d.rect.w,
                          d.rect.h, d.score);
            out += path + buf;
        }
    return out;
}

// ---- training ----------------------------------------------------------------

namespace {

// dense feature rows for a set of windows, variance corrected
void extract_rows(const std::vector<std::pair<const IntegralPair*, Rect>>& windows,
                  LutCache& luts, std::size_t n_features, int jobs, std::vector<double>& rows) {
    rows.resize(windows.size() * n_features);
    // LUTs must exist before the parallel region
    std::vector<const ScaledFeatureLUT*> lut_of(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        lut_of[i] = &luts.for_window(windows[i].second.w);
    parallel_for(windows.size(), jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& [ip, rect] = windows[i];
            const double std_dev = window_stats(*ip, rect).corrected_std();
            double* dst = rows.data() + i * n_features;
            for (std::size_t f = 0; f < n_features; ++f)
                dst[f] = eval_feature(*lut_of[i], f, *ip, rect.x, rect.y, std_dev);
        }
    });
}

struct ThetaFit {
    double theta = 0.0;
    double detection_rate = 0.0;
    bool degenerate = false;
};

// lowest theta whose holdout detection rate still meets d_min
ThetaFit fit_theta(const StrongClassifier& stage, const std::vector<double>& holdout_scores,
                   double d_min) {
    if (d_min > 1.0)
        throw TrainError("stage rejected: d_min " + std::to_string(d_min) +
                         " is unreachable at any theta");
    std::vector<double> sorted = holdout_scores;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const auto allowed =
        static_cast<std::size_t>(std::floor((1.0 - d_min) * static_cast<double>(n)));
    ThetaFit fit;
    if (allowed >= n) {
        fit.theta = std::numeric_limits<double>::max();
        fit.degenerate = true;
        fit.detection_rate = 0.0;
        return fit;
    }
    fit.theta = sorted[allowed];
    std::size_t passing = 0;
    for (const double s : holdout_scores)
        if (s >= fit.theta) ++passing;
    fit.detection_rate = static_cast<double>(passing) / static_cast<double>(n);
    return fit;
}

class NegativeMiner {
public:
    NegativeMiner(const std::vector<GrayImage>& sources, const CascadeModel& model,
                  LutCache& luts, std::uint64_t seed, int jobs)
        : model_(model), luts_(&luts), rng_(seed), jobs_(jobs) {
        for (const GrayImage& img : sources) {
            if (img.width < model.base || img.height < model.base) continue;
            integrals_.emplace_back(img);
        }
        if (integrals_.empty())
            throw DataError("no nonface source is at least base window sized");
        ScanConfig cfg;
        for (const IntegralPair& ip : integrals_) {
            auto sizes = scan_window_sizes(model.base, ip.width(), ip.height(), cfg);
            for (const int win : sizes) luts.for_window(win);  // before any parallel use
            sizes_.push_back(std::move(sizes));
        }
    }

    // windows from the sources that pass every current stage; needed == 0
    // runs the whole budget and only measures the pass rate
    std::vector<std::pair<const IntegralPair*, Rect>> mine(std::size_t needed,
                                                           std::uint64_t budget,
                                                           double* fp_estimate) {
        std::vector<std::pair<const IntegralPair*, Rect>> accepted;
        std::uint64_t attempts = 0;
        std::uint64_t passes = 0;
        const std::size_t batch = 512;
        std::vector<std::pair<std::size_t, Rect>> cands(batch);
        std::vector<char> pass(batch);
        while ((needed == 0 || accepted.size() < needed) && attempts < budget) {
            const std::size_t take =
                std::min<std::uint64_t>(batch, budget - attempts);
            for (std::size_t k = 0; k < take; ++k) {
                const std::size_t src = rng_.below(integrals_.size());
                const auto& sizes = sizes_[src];
                const int win = sizes[rng_.below(sizes.size())];
                const IntegralPair& ip = integrals_[src];
                const int x = static_cast<int>(rng_.below(ip.width() - win + 1));
                const int y = static_cast<int>(rng_.below(ip.height() - win + 1));
                cands[k] = {src, Rect{x, y, win, win}};
            }
            parallel_for(take, jobs_, [&](std::size_t begin, std::size_t end) {
                for (std::size_t k = begin; k < end; ++k) {
                    const IntegralPair& ip = integrals_[cands[k].first];
                    if (model_.stages.empty()) {
                        pass[k] = 1;
                        continue;
                    }
                    const ScaledFeatureLUT& lut = luts_->for_window(cands[k].second.w);
                    pass[k] = cascade_classify(model_, ip, cands[k].second, lut).accepted;
                }
            });
            attempts += take;
            for (std::size_t k = 0; k < take; ++k) {
                if (!pass[k]) continue;
                ++passes;
                if (needed > 0 && accepted.size() < needed)
                    accepted.emplace_back(&integrals_[cands[k].first], cands[k].second);
            }
        }
        if (fp_estimate)
            *fp_estimate = attempts ? static_cast<double>(passes) / attempts : 1.0;
        return accepted;
    }

    double estimate_fp(std::uint64_t attempts) {
        double estimate = 1.0;
        mine(0, attempts, &estimate);
        return estimate;
    }

private:
    const CascadeModel& model_;
    LutCache* luts_;
    Rng rng_;
    int jobs_;
    std::vector<IntegralPair> integrals_;
    std::vector<std::vector<int>> sizes_;
};

}  // namespace

CascadeModel train_cascade(const std::vector<GrayImage>& faces,
                           const std::vector<GrayImage>& nonface_sources,
                           const StageGoals& goals, CascadeLearner learner,
                           const CascadeLimits& limits, int base) {
    if (base < 1) throw ConfigError("base window must be >= 1");
    if (faces.empty()) throw DataError("no face windows given");
    if (nonface_sources.empty()) throw DataError("no nonface sources given");
    for (const GrayImage& f : faces)
        if (f.width != base || f.height != base)
            throw DataError("face window is " + std::to_string(f.width) + "x" +
                            std::to_string(f.height) + ", expected " + std::to_string(base) +
                            "x" + std::to_string(base));
    if (goals.d_min > 1.0)
        throw TrainError("stage rejected: d_min above 1 is unreachable at any theta");

    const FeaturePool pool = enumerate_pool(base);
    LutCache luts(pool, base);

    CascadeModel model;
    model.base = base;
    model.pool_digest = pool_digest(pool);
    model.learner = learner_name(learner);
    model.seed = limits.seed;

    // face split: holdout tunes theta, the rest trains
    Rng split_rng(split_seed(limits.seed, 0xFACE));
    std::vector<std::size_t> face_idx(faces.size());
    std::iota(face_idx.begin(), face_idx.end(), std::size_t{0});
    for (std::size_t i = face_idx.size(); i > 1; --i)
        std::swap(face_idx[i - 1], face_idx[split_rng.below(i)]);
    std::size_t holdout_n = static_cast<std::size_t>(
        std::llround(limits.holdout_fraction * static_cast<double>(faces.size())));
    holdout_n = std::clamp<std::size_t>(holdout_n, 1, faces.size());
    std::vector<std::size_t> holdout(face_idx.begin(), face_idx.begin() + holdout_n);
    std::vector<std::size_t> train_faces(face_idx.begin() + holdout_n, face_idx.end());
    if (train_faces.empty()) train_faces = holdout;  // single-face corner case

    std::vector<IntegralPair> face_ips;
    face_ips.reserve(faces.size());
    for (const GrayImage& f : faces) face_ips.emplace_back(f);

    auto face_windows = [&](const std::vector<std::size_t>& ids) {
        std::vector<std::pair<const IntegralPair*, Rect>> ws;
        ws.reserve(ids.size());
        for (const std::size_t i : ids) ws.emplace_back(&face_ips[i], Rect{0, 0, base, base});
        return ws;
    };
    std::vector<double> train_rows, holdout_rows;
    extract_rows(face_windows(train_faces), luts, pool.size(), limits.jobs, train_rows);
    extract_rows(face_windows(holdout), luts, pool.size(), limits.jobs, holdout_rows);

    NegativeMiner miner(nonface_sources, model, luts, split_seed(limits.seed, 0x9E9), limits.jobs);
    const std::size_t negatives_goal =
        limits.negatives_per_stage ? limits.negatives_per_stage : 10 * train_faces.size();

    double fp_estimate = 1.0;
    for (int stage_no = 1; stage_no <= limits.max_stages; ++stage_no) {
        const std::uint64_t budget =
            std::max<std::uint64_t>(negatives_goal * limits.mining_budget_factor, 20000);
        const auto negative_windows = miner.mine(negatives_goal, budget, &fp_estimate);
        if (stage_no > 1) model.cumulative_fp_estimate = fp_estimate;
        if (stage_no > 1 && limits.target_fp > 0.0 && fp_estimate <= limits.target_fp) break;
        if (negative_windows.size() < std::max<std::size_t>(negatives_goal / 10, 2)) {
            model.warnings.push_back("negative bootstrap exhausted before stage " +
                                     std::to_string(stage_no) + "; stopping with " +
                                     std::to_string(model.stages.size()) + " stage(s)");
            break;
        }
        std::vector<double> neg_rows;
        extract_rows(negative_windows, luts, pool.size(), limits.jobs, neg_rows);

        Dataset stage_data(pool.size());
        stage_data.reserve(train_faces.size() + negative_windows.size());
        for (std::size_t i = 0; i < train_faces.size(); ++i)
            stage_data.add({train_rows.data() + i * pool.size(), pool.size()}, +1);
        for (std::size_t i = 0; i < negative_windows.size(); ++i)
            stage_data.add({neg_rows.data() + i * pool.size(), pool.size()}, -1);

        // one deterministic seed per stage
        const std::uint64_t stage_seed = split_seed(limits.seed, 0x57A6E000 + stage_no);

        StrongClassifier best_stage;
        ThetaFit best_fit;
        double best_fp = 1.0;
        std::vector<BoostRound> stage_rounds;

        auto holdout_scores = [&](const StrongClassifier& s) {
            std::vector<double> scores(holdout.size());
            parallel_for(holdout.size(), limits.jobs, [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i)
                    scores[i] = strong_score(
                        s, DenseView({holdout_rows.data() + i * pool.size(), pool.size()}));
            });
            return scores;
        };
        auto negative_fp = [&](const StrongClassifier& s, double theta) {
            std::size_t passing = 0;
            for (std::size_t i = 0; i < negative_windows.size(); ++i) {
                const DenseView row({neg_rows.data() + i * pool.size(), pool.size()});
                if (strong_score(s, row) >= theta) ++passing;
            }
            return static_cast<double>(passing) / static_cast<double>(negative_windows.size());
        };

        if (learner == CascadeLearner::Svm) {
            BoostSvmConfig cfg = limits.svm;
            cfg.seed = stage_seed;
            if (cfg.feature_subset_size == 0)
                cfg.feature_subset_size = std::min<std::size_t>(pool.size(), 12);
            AdaBoostSvmResult res = run_adaboost_svm(stage_data, cfg);
            best_stage = std::move(res.classifier);
            stage_rounds = std::move(res.rounds);
            for (SvmRoundLog row : res.log) {
                row.t += (stage_no - 1) * 1000;  // stage * 1000 + round
                model.round_log.push_back(row);
            }
            best_fit = fit_theta(best_stage, holdout_scores(best_stage), goals.d_min);
            best_fp = negative_fp(best_stage, best_fit.theta);
        } else {
            const StumpTrainer sorter(stage_data, limits.jobs);
            ComponentLearn learn;
            switch (learner) {
                case CascadeLearner::Stumps:
                    learn = [&](const Dataset&, const WeightVector& w, Rng&) {
                        return ComponentClassifier(sorter.best_stump(w));
                    };
                    break;
                case CascadeLearner::Tree:
                    learn = [&](const Dataset& d, const WeightVector& w, Rng&) {
                        return ComponentClassifier(learn_tree(d, w, limits.tree_depth));
                    };
                    break;
                default:
                    learn = [&](const Dataset& d, const WeightVector& w, Rng& r) {
                        return ComponentClassifier(
                            learn_tinynet(d, w, limits.net_hidden, limits.net_epochs, r));
                    };
                    break;
            }
            // grow the stage until it meets f_max or hits the round cap
            const int growth = std::max(1, limits.round_growth);
            int initial_rounds = limits.rounds_per_stage;
            if (!limits.stage_rounds.empty()) {
                const std::size_t idx = std::min<std::size_t>(stage_no - 1,
                                                              limits.stage_rounds.size() - 1);
                initial_rounds = limits.stage_rounds[idx];
            }
            const int round_cap = std::max(initial_rounds, limits.max_rounds_per_stage);
            for (int rounds = initial_rounds;; rounds += growth) {
                rounds = std::min(rounds, round_cap);
                Rng round_rng(stage_seed);  // identical stream for each retry
                AdaBoostResult res = run_adaboost(stage_data, learn, rounds, round_rng);
                best_stage = std::move(res.classifier);
                stage_rounds = std::move(res.rounds);
                best_fit = fit_theta(best_stage, holdout_scores(best_stage), goals.d_min);
                best_fp = negative_fp(best_stage, best_fit.theta);
                if (best_fp <= goals.f_max || rounds >= round_cap ||
                    static_cast<int>(stage_rounds.size()) < rounds)
                    break;  // met the goal, hit the cap, or stopped early on eps=0
            }
            for (const BoostRound& r : stage_rounds) {
                SvmRoundLog row;
                row.t = (stage_no - 1) * 1000 + r.t;
                row.sigma = 0.0;
                row.epsilon = r.epsilon;
                row.alpha = r.alpha;
                row.accepted = true;
                model.round_log.push_back(row);
            }
        }

        if (best_fp > goals.f_max)
            model.warnings.push_back("stage " + std::to_string(stage_no) +
                                     " missed f_max: fp " + std::to_string(best_fp));
        best_stage.theta = best_fit.theta;
        model.stages.push_back(std::move(best_stage));
        model.stage_meta.push_back({static_cast<int>(stage_rounds.size()), best_fit.theta,
                                    best_fit.detection_rate, best_fp, best_fit.degenerate});
        if (best_fit.degenerate)
            model.warnings.push_back("stage " + std::to_string(stage_no) +
                                     " is degenerate: theta rejects every window (d_min = 0)");
    }

    if (model.stages.empty()) throw TrainError("no cascade stage could be trained");
    model.cumulative_fp_estimate = miner.estimate_fp(20000);
    return model;
}

}  // namespace boostdet
