#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "boostdet/data.hpp"
#include "boostdet/rng.hpp"
#include "boostdet/svm.hpp"

namespace boostdet {

// ---- component classifiers -------------------------------------------------

// predict = polarity if x[feature] >= threshold else -polarity
struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    int polarity = +1;
};

// binary tree of threshold splits; left = value < threshold
struct TreeNode {
    int feature = -1;  // < 0 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_label = +1;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

// one tanh hidden layer, linear output, inputs z-scored with the stored
// per-dimension statistics
struct TinyNet {
    std::size_t input_dim = 0;
    int hidden = 0;
    std::vector<double> w1;  // hidden x input, row major
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
    std::vector<double> feat_mean;
    std::vector<double> feat_scale;
};

// RBF-SVM over a projection onto feature_subset (identity in tabular mode)
struct SvmComponent {
    std::vector<std::uint32_t> feature_subset;
    RbfSvmModel model;
};

using ComponentClassifier = std::variant<Stump, DecisionTree, TinyNet, SvmComponent>;

int component_predict(const ComponentClassifier& h, const FeatureView& x);
int component_predict(const ComponentClassifier& h, std::span<const double> x);
double tinynet_output(const TinyNet& net, const FeatureView& x);

// ---- the boosting loop ------------------------------------------------------

// Per-round audit record.
struct BoostRound {
    int t = 0;                 // 1-based round index
    double epsilon = 0.0;      // weighted training error of the round's learner
    double alpha = 0.0;
    double normalizer = 1.0;   // the weight-update normalization constant
    std::size_t learner_id = 0;
    bool alpha_clamped = false;
    double weight_sum = 1.0;   // post-update sum, audited to 1 within 1e-12
};

struct StrongClassifier {
    struct Round {
        double alpha = 0.0;
        ComponentClassifier h;
    };
    std::vector<Round> rounds;
    double theta = 0.0;  // decision threshold; stage acceptance is score >= theta
};

struct StrongDecision {
    double score = 0.0;
    int label = +1;
};

double strong_score(const StrongClassifier& s, const FeatureView& x);
StrongDecision strong_decision(const StrongClassifier& s, const FeatureView& x);
StrongDecision strong_decision(const StrongClassifier& s, std::span<const double> x);

// epsilon = sum of weights of misclassified samples
double weighted_error(const ComponentClassifier& h, const Dataset& data, const WeightVector& w);

// alpha = 0.5 * ln((1 - eps) / eps); eps is clamped into
// [1e-10, 1 - 1e-10] and *clamped reports when that happened.
double alpha_of(double epsilon, bool* clamped = nullptr);

// multiplicative update w_i *= exp(-alpha y_i h(x_i)), then division by the
// normalization constant; returns that constant
double update_weights(WeightVector& w, double alpha, std::span<const int> predictions,
                      const Dataset& data);
double update_weights(WeightVector& w, double alpha, const ComponentClassifier& h,
                      const Dataset& data);

using ComponentLearn =
    std::function<ComponentClassifier(const Dataset&, const WeightVector&, Rng&)>;

struct AdaBoostResult {
    StrongClassifier classifier;
    std::vector<BoostRound> rounds;
    double training_error = 0.0;  // 0-1 error of the ensemble at theta = 0
    double error_bound = 1.0;     // prod_t 2 sqrt(eps_t (1 - eps_t))
};

// T rounds of reweighting and voting; stops early when a round reaches
// eps = 0 (that round is kept with a clamped alpha). Rounds with eps >= 0.5
// are kept with alpha <= 0. Verifies the exponential training-error bound
// and the weight normalization on every run.
AdaBoostResult run_adaboost(const Dataset& data, const ComponentLearn& learner, int rounds,
                            Rng& rng);

// ---- baseline weak-learner families -----------------------------------------

// Exact minimizer of weighted error over (feature, midpoint threshold,
// polarity); ties resolved toward the smallest feature id, then the smallest
// threshold. Presorts feature columns once, so boosting rounds only pay the
// linear sweep.
class StumpTrainer {
public:
    explicit StumpTrainer(const Dataset& data, int jobs = 1);

    Stump best_stump(const WeightVector& w) const;
    // best achievable weighted error using only this feature
    double column_best_error(std::size_t feature, const WeightVector& w) const;
    const Dataset& data() const { return *data_; }

private:
    struct Candidate {
        double error;
        std::size_t feature;
        double threshold;
        int polarity;
    };
    Candidate sweep_column(std::size_t feature, const WeightVector& w) const;

    const Dataset* data_;
    int jobs_ = 1;
    std::vector<std::uint32_t> order_;  // per-feature argsort, concatenated
};

Stump learn_stump(const Dataset& data, const WeightVector& w);
DecisionTree learn_tree(const Dataset& data, const WeightVector& w, int max_depth = 3);
TinyNet learn_tinynet(const Dataset& data, const WeightVector& w, int hidden, int epochs,
                      Rng& rng);

}  // namespace boostdet
