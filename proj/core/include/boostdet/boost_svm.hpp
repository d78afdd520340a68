#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boostdet/boost.hpp"

namespace boostdet {

// Kernel-width schedule: start wide (weak), shrink by sigma_step whenever a
// round's weighted error exceeds 0.5, stop at sigma_min.
struct SigmaSchedule {
    double sigma_ini = 0.0;
    double sigma_min = 0.0;
    double sigma_step = 0.0;

    bool configured() const { return sigma_ini > 0.0 && sigma_min > 0.0 && sigma_step > 0.0; }
};

// Scale-free defaults: sigma_ini = 10x the median pairwise distance of a
// subsample (<= 200 points), sigma_min = 0.1x, sigma_step spans the range in
// 20 decrements.
SigmaSchedule default_sigma_schedule(const Dataset& data, std::uint64_t seed);

struct BoostSvmConfig {
    SigmaSchedule schedule;          // unset -> derived from the data
    double c = 1.0;
    std::size_t resample_n = 0;      // 0 -> min(N, 1000)
    int t_max = 50;
    std::size_t feature_subset_size = 0;  // 0 or >= dim -> train on all dimensions
    std::uint64_t seed = 1;
    SolverConfig solver;
};

// One row per training attempt, accepted or not.
struct SvmRoundLog {
    int t = 0;  // index of the round this attempt was for (1-based)
    double sigma = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0;
    bool accepted = false;
    std::uint64_t resample_seed = 0;
};

std::string round_log_csv(const std::vector<SvmRoundLog>& log);

struct AdaBoostSvmResult {
    StrongClassifier classifier;
    std::vector<BoostRound> rounds;
    std::vector<SvmRoundLog> log;
    double training_error = 0.0;
    double error_bound = 1.0;
    double sigma_final = 0.0;
};

// Boosting with RBF-SVM component classifiers and the adaptive sigma
// schedule: train on a weighted resample, measure epsilon on the full
// weighted set, reject the round and shrink sigma when epsilon > 0.5.
// Terminates when sigma reaches sigma_min or t_max rounds are recorded;
// throws TrainError("schedule exhausted ...") if no round was ever accepted.
AdaBoostSvmResult run_adaboost_svm(const Dataset& data, const BoostSvmConfig& cfg);

// One component classifier at a fixed sigma. With feature_subset_size < dim
// the input is first projected onto the d features with the smallest
// weighted stump error under w (image mode); otherwise the SVM sees every
// dimension. Deterministic: identical inputs and cfg.seed give an identical
// component. `sorter`, when given, must wrap `data` and saves the per-call
// column sort.
ComponentClassifier make_svm_component(const Dataset& data, const WeightVector& w, double sigma,
                                       const BoostSvmConfig& cfg,
                                       const StumpTrainer* sorter = nullptr);

}  // namespace boostdet
