#include "boostdet/boost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "boostdet/error.hpp"
#include "boostdet/parallel.hpp"

namespace boostdet {

namespace {

int stump_predict(const Stump& s, double value) {
    return value >= s.threshold ? s.polarity : -s.polarity;
}

int tree_predict(const DecisionTree& t, const FeatureView& x) {
    int node = 0;
    while (!t.nodes[node].is_leaf()) {
        const TreeNode& n = t.nodes[node];
        node = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return t.nodes[node].leaf_label;
}

}  // namespace

double tinynet_output(const TinyNet& net, const FeatureView& x) {
    std::vector<double> act(net.b1);
    for (std::size_t j = 0; j < net.input_dim; ++j) {
        const double z = (x[j] - net.feat_mean[j]) / net.feat_scale[j];
        const double* wcol = net.w1.data() + j;
        for (int k = 0; k < net.hidden; ++k) act[k] += wcol[static_cast<std::size_t>(k) * net.input_dim] * z;
    }
    double out = net.b2;
    for (int k = 0; k < net.hidden; ++k) out += net.w2[k] * std::tanh(act[k]);
    return out;
}

int component_predict(const ComponentClassifier& h, const FeatureView& x) {
    return std::visit(
        [&](const auto& c) -> int {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Stump>) {
                return stump_predict(c, x[c.feature]);
            } else if constexpr (std::is_same_v<T, DecisionTree>) {
                return tree_predict(c, x);
            } else if constexpr (std::is_same_v<T, TinyNet>) {
                return sign_pm(tinynet_output(c, x));
            } else {
                std::vector<double> proj(c.feature_subset.size());
                for (std::size_t k = 0; k < proj.size(); ++k) proj[k] = x[c.feature_subset[k]];
                return svm_predict(c.model, proj);
            }
        },
        h);
}

int component_predict(const ComponentClassifier& h, std::span<const double> x) {
    return component_predict(h, DenseView(x));
}

double strong_score(const StrongClassifier& s, const FeatureView& x) {
    double score = 0.0;
    for (const auto& r : s.rounds) score += r.alpha * component_predict(r.h, x);
    return score;
}

StrongDecision strong_decision(const StrongClassifier& s, const FeatureView& x) {
    const double score = strong_score(s, x);
    return {score, sign_pm(score - s.theta)};
}

StrongDecision strong_decision(const StrongClassifier& s, std::span<const double> x) {
    return strong_decision(s, DenseView(x));
}

double weighted_error(const ComponentClassifier& h, const Dataset& data, const WeightVector& w) {
    if (w.size() != data.size()) throw DataError("weight vector size does not match data");
    double eps = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (component_predict(h, data.point(i)) != data.label(i)) eps += w[i];
    return std::clamp(eps, 0.0, 1.0);
}

double alpha_of(double epsilon, bool* clamped) {
    constexpr double kFloor = 1e-10;
    const double e = std::clamp(epsilon, kFloor, 1.0 - kFloor);
    if (clamped) *clamped = e != epsilon;
    return 0.5 * std::log((1.0 - e) / e);
}

double update_weights(WeightVector& w, double alpha, std::span<const int> predictions,
                      const Dataset& data) {
    if (w.size() != data.size() || predictions.size() != data.size())
        throw DataError("weight/prediction size does not match data");
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] *= std::exp(-alpha * data.label(i) * predictions[i]);
        total += w[i];
    }
    if (!(total > 0.0)) throw TrainError("weight update produced a non-positive normalizer");
    for (double& v : w) v /= total;
    return total;
}

double update_weights(WeightVector& w, double alpha, const ComponentClassifier& h,
                      const Dataset& data) {
    std::vector<int> preds(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        preds[i] = component_predict(h, data.point(i));
    return update_weights(w, alpha, preds, data);
}

AdaBoostResult run_adaboost(const Dataset& data, const ComponentLearn& learner, int rounds,
                            Rng& rng) {
    if (rounds < 1) throw ConfigError("boosting needs at least one round");
    if (data.size() == 0) throw DataError("empty dataset");

    AdaBoostResult out;
    WeightVector w = uniform_weights(data.size());
    std::vector<int> preds(data.size());

    for (int t = 1; t <= rounds; ++t) {
        ComponentClassifier h;
        try {
            h = learner(data, w, rng);
        } catch (const std::exception& e) {
            throw TrainError("component learner failed in round " + std::to_string(t) + ": " +
                             e.what());
        }
        double eps = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            preds[i] = component_predict(h, data.point(i));
            if (preds[i] != data.label(i)) eps += w[i];
        }
        eps = std::clamp(eps, 0.0, 1.0);

        BoostRound round;
        round.t = t;
        round.epsilon = eps;
        round.alpha = alpha_of(eps, &round.alpha_clamped);
        round.learner_id = out.classifier.rounds.size();
        out.classifier.rounds.push_back({round.alpha, std::move(h)});

        if (eps == 0.0) {
            // a perfect component ends the loop; the update would leave the
            // distribution unchanged anyway
            round.normalizer = std::exp(-round.alpha);
            round.weight_sum = 1.0;
            out.rounds.push_back(round);
            break;
        }
        round.normalizer = update_weights(w, round.alpha, preds, data);
        round.weight_sum = std::accumulate(w.begin(), w.end(), 0.0);
        out.rounds.push_back(round);
        if (std::abs(round.weight_sum - 1.0) > 1e-12)
            throw TrainError("weight vector drifted from 1 in round " + std::to_string(t));
    }

    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (strong_decision(out.classifier, data.point(i)).label != data.label(i)) ++mistakes;
    out.training_error = static_cast<double>(mistakes) / static_cast<double>(data.size());
    out.error_bound = 1.0;
    for (const auto& r : out.rounds)
        out.error_bound *= 2.0 * std::sqrt(r.epsilon * (1.0 - r.epsilon));
    if (out.training_error > out.error_bound + 1e-12)
        throw TrainError("training error exceeds the exponential bound; boosting state corrupt");
    return out;
}

// ---- stump ------------------------------------------------------------------

StumpTrainer::StumpTrainer(const Dataset& data, int jobs) : data_(&data), jobs_(jobs) {
    const std::size_t n = data.size();
    const std::size_t dim = data.dim();
    if (n == 0 || dim == 0) throw DataError("empty dataset");
    order_.resize(n * dim);
    parallel_for(dim, jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f) {
            std::uint32_t* ord = order_.data() + f * n;
            std::iota(ord, ord + n, 0u);
            std::stable_sort(ord, ord + n, [&](std::uint32_t a, std::uint32_t b) {
                return data.point(a)[f] < data.point(b)[f];
            });
        }
    });
}

StumpTrainer::Candidate StumpTrainer::sweep_column(std::size_t f, const WeightVector& w) const {
    const Dataset& data = *data_;
    const std::size_t n = data.size();
    const std::uint32_t* ord = order_.data() + f * n;

    double total_pos = 0.0, total_neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) (data.label(i) > 0 ? total_pos : total_neg) += w[i];
    const double total = total_pos + total_neg;

    // constant stump: threshold below every value, everything predicted
    // `polarity`
    const double v_min = data.point(ord[0])[f];
    Candidate best{total_neg, f, v_min - 1.0, +1};
    if (total_pos < best.error) best = {total_pos, f, v_min - 1.0, -1};

    double below_pos = 0.0, below_neg = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        const std::uint32_t idx = ord[p];
        (data.label(idx) > 0 ? below_pos : below_neg) += w[idx];
        const double v = data.point(idx)[f];
        const double v_next = data.point(ord[p + 1])[f];
        if (!(v_next > v)) continue;
        const double thr = 0.5 * (v + v_next);
        const double err_plus = below_pos + (total_neg - below_neg);
        const double err_minus = total - err_plus;
        if (err_plus < best.error ||
            (err_plus == best.error && thr < best.threshold)) best = {err_plus, f, thr, +1};
        if (err_minus < best.error ||
            (err_minus == best.error && thr < best.threshold)) best = {err_minus, f, thr, -1};
    }
    return best;
}

Stump StumpTrainer::best_stump(const WeightVector& w) const {
    if (w.size() != data_->size()) throw DataError("weight vector size does not match data");
    const std::size_t dim = data_->dim();
    std::vector<Candidate> per_feature(dim, Candidate{0.0, 0, 0.0, +1});
    parallel_for(dim, jobs_, [&](std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f) per_feature[f] = sweep_column(f, w);
    });
    Candidate best = per_feature[0];
    for (std::size_t f = 1; f < dim; ++f) {
        const Candidate& c = per_feature[f];
        if (c.error < best.error) best = c;  // equal error keeps the smaller feature id
    }
    return Stump{best.feature, best.threshold, best.polarity};
}

double StumpTrainer::column_best_error(std::size_t f, const WeightVector& w) const {
    return sweep_column(f, w).error;
}

Stump learn_stump(const Dataset& data, const WeightVector& w) {
    return StumpTrainer(data).best_stump(w);
}

// ---- tree -------------------------------------------------------------------

namespace {

struct TreeBuilder {
    const Dataset& data;
    const WeightVector& w;
    int max_depth;
    std::vector<TreeNode> nodes;

    int leaf(const std::vector<std::uint32_t>& idx) {
        double vote = 0.0;
        for (const auto i : idx) vote += w[i] * data.label(i);
        TreeNode n;
        n.leaf_label = sign_pm(vote);
        nodes.push_back(n);
        return static_cast<int>(nodes.size() - 1);
    }

    static double gini(double pos, double neg) {
        const double tot = pos + neg;
        if (tot <= 0.0) return 0.0;
        const double p = pos / tot;
        const double q = neg / tot;
        return tot * (1.0 - p * p - q * q);
    }

    int build(std::vector<std::uint32_t> idx, int depth) {
        double pos = 0.0, neg = 0.0;
        for (const auto i : idx) (data.label(i) > 0 ? pos : neg) += w[i];
        if (depth >= max_depth || pos == 0.0 || neg == 0.0 || idx.size() < 2) return leaf(idx);

        const double parent = gini(pos, neg);
        double best_gain = 1e-12;
        std::size_t best_f = 0;
        double best_thr = 0.0;
        bool found = false;

        std::vector<std::pair<double, std::uint32_t>> column(idx.size());
        for (std::size_t f = 0; f < data.dim(); ++f) {
            for (std::size_t k = 0; k < idx.size(); ++k)
                column[k] = {data.point(idx[k])[f], idx[k]};
            std::stable_sort(column.begin(), column.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            double below_pos = 0.0, below_neg = 0.0;
            for (std::size_t p = 0; p + 1 < idx.size(); ++p) {
                (data.label(column[p].second) > 0 ? below_pos : below_neg) += w[column[p].second];
                if (!(column[p + 1].first > column[p].first)) continue;
                const double thr = 0.5 * (column[p].first + column[p + 1].first);
                const double impurity = gini(below_pos, below_neg) +
                                        gini(pos - below_pos, neg - below_neg);
                const double gain = parent - impurity;
                if (gain > best_gain || (gain == best_gain && found &&
                                         (f < best_f || (f == best_f && thr < best_thr)))) {
                    best_gain = gain;
                    best_f = f;
                    best_thr = thr;
                    found = true;
                }
            }
        }
        if (!found) return leaf(idx);

        std::vector<std::uint32_t> left, right;
        for (const auto i : idx)
            (data.point(i)[best_f] < best_thr ? left : right).push_back(i);
        if (left.empty() || right.empty()) return leaf(idx);

        const int self = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[self].feature = static_cast<int>(best_f);
        nodes[self].threshold = best_thr;
        const int l = build(std::move(left), depth + 1);
        const int r = build(std::move(right), depth + 1);
        nodes[self].left = l;
        nodes[self].right = r;
        return self;
    }
};

}  // namespace

DecisionTree learn_tree(const Dataset& data, const WeightVector& w, int max_depth) {
    if (max_depth < 1) throw ConfigError("tree depth must be >= 1");
    if (w.size() != data.size()) throw DataError("weight vector size does not match data");
    TreeBuilder builder{data, w, max_depth, {}};
    std::vector<std::uint32_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0u);
    builder.build(std::move(idx), 0);
    DecisionTree tree;
    tree.nodes = std::move(builder.nodes);
    return tree;
}

// ---- tiny net ---------------------------------------------------------------

TinyNet learn_tinynet(const Dataset& data, const WeightVector& w, int hidden, int epochs,
                      Rng& rng) {
    if (hidden < 1 || epochs < 1) throw ConfigError("tinynet needs hidden >= 1 and epochs >= 1");
    if (w.size() != data.size()) throw DataError("weight vector size does not match data");
    const std::size_t dim = data.dim();
    const std::size_t n = data.size();

    // bootstrap from the boosting distribution, then plain full-batch descent
    const auto cum = cumulative_weights(w);
    std::vector<std::uint32_t> sample(n);
    for (std::size_t k = 0; k < n; ++k)
        sample[k] = static_cast<std::uint32_t>(sample_index(cum, rng.uniform()));

    TinyNet net;
    net.input_dim = dim;
    net.hidden = hidden;
    net.feat_mean.assign(dim, 0.0);
    net.feat_scale.assign(dim, 1.0);
    for (std::size_t j = 0; j < dim; ++j) {
        double mean = 0.0;
        for (const auto i : sample) mean += data.point(i)[j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto i : sample) {
            const double d = data.point(i)[j] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        net.feat_mean[j] = mean;
        net.feat_scale[j] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }

    const double init1 = 1.0 / std::sqrt(static_cast<double>(dim));
    const double init2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    net.w1.resize(static_cast<std::size_t>(hidden) * dim);
    net.b1.assign(hidden, 0.0);
    net.w2.resize(hidden);
    for (double& v : net.w1) v = rng.uniform(-init1, init1);
    for (double& v : net.w2) v = rng.uniform(-init2, init2);

    std::vector<double> z(n * dim);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < dim; ++j)
            z[k * dim + j] = (data.point(sample[k])[j] - net.feat_mean[j]) / net.feat_scale[j];

    const double lr = 0.1;
    std::vector<double> act(hidden), tanh_act(hidden);
    std::vector<double> gw1(net.w1.size()), gb1(hidden), gw2(hidden);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::fill(gw1.begin(), gw1.end(), 0.0);
        std::fill(gb1.begin(), gb1.end(), 0.0);
        std::fill(gw2.begin(), gw2.end(), 0.0);
        double gb2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double* x = z.data() + k * dim;
            for (int hsz = 0; hsz < hidden; ++hsz) {
                double a = net.b1[hsz];
                const double* row = net.w1.data() + static_cast<std::size_t>(hsz) * dim;
                for (std::size_t j = 0; j < dim; ++j) a += row[j] * x[j];
                act[hsz] = a;
                tanh_act[hsz] = std::tanh(a);
            }
            double out = net.b2;
            for (int hsz = 0; hsz < hidden; ++hsz) out += net.w2[hsz] * tanh_act[hsz];
            const double target = data.label(sample[k]);
            const double dout = 2.0 * (out - target) / static_cast<double>(n);
            gb2 += dout;
            for (int hsz = 0; hsz < hidden; ++hsz) {
                gw2[hsz] += dout * tanh_act[hsz];
                const double dh = dout * net.w2[hsz] * (1.0 - tanh_act[hsz] * tanh_act[hsz]);
                gb1[hsz] += dh;
                double* grow = gw1.data() + static_cast<std::size_t>(hsz) * dim;
                for (std::size_t j = 0; j < dim; ++j) grow[j] += dh * x[j];
            }
        }
        for (std::size_t i = 0; i < net.w1.size(); ++i) net.w1[i] -= lr * gw1[i];
        for (int hsz = 0; hsz < hidden; ++hsz) {
            net.b1[hsz] -= lr * gb1[hsz];
            net.w2[hsz] -= lr * gw2[hsz];
        }
        net.b2 -= lr * gb2;
    }

    for (const double v : net.w1)
        if (!std::isfinite(v)) throw TrainError("tinynet training diverged");
    return net;
}

}  // namespace boostdet
