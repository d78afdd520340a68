#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "boostdet/data.hpp"
#include "boostdet/kernel.hpp"

namespace boostdet {

struct SolverConfig {
    double kkt_tolerance = 1e-3;
    int max_passes = 200;            // iteration cap = max_passes * n pair updates
    std::size_t cache_budget = 512;  // kernel rows kept in the LRU cache
};

// Soft-margin kernel SVM in dual form. dual_coefs[j] = y_j * alpha_j for
// support vector j, so the decision function is
//   f(x) = sum_j dual_coefs[j] * K(sv_j, x) + bias.
struct RbfSvmModel {
    KernelSpec kernel;
    double c = 1.0;
    std::size_t dim = 0;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefs;
    double bias = 0.0;
    bool converged = true;
    std::uint64_t resample_seed = 0;  // 0 when trained without resampling
};

// Trains by sequential minimal optimization with maximal-KKT-violating pair
// selection. The returned model satisfies the dual KKT conditions within
// cfg.kkt_tolerance; if the iteration cap is hit first, the best iterate is
// returned with converged = false. Throws DataError for single-class data.
RbfSvmModel train_svm(const Dataset& data, const KernelSpec& kernel, double c,
                      const SolverConfig& cfg = {});

// Same solver with a per-sample box constraint 0 <= alpha_i <= box[i].
RbfSvmModel train_svm_boxed(const Dataset& data, const KernelSpec& kernel,
                            std::span<const double> box, const SolverConfig& cfg = {});

double svm_decision(const RbfSvmModel& m, std::span<const double> x);
int svm_predict(const RbfSvmModel& m, std::span<const double> x);  // sign, sign(0) = +1

// Dual objective sum(alpha) - 1/2 sum_ij y_i y_j alpha_i alpha_j K_ij,
// computable from the stored support expansion alone.
double svm_dual_objective(const RbfSvmModel& m);

// Weak-learner training under a boosting distribution. Resample draws n
// points i.i.d. from the weights (with replacement, seeded) and trains on
// the bootstrap; Reweight embeds the weights in the dual via per-sample
// bounds C_i = C * N * w_i.
struct ResampleMode {
    std::size_t n = 0;
    std::uint64_t seed = 1;
};
struct ReweightMode {};
using WeightedMode = std::variant<ResampleMode, ReweightMode>;

RbfSvmModel train_weighted_svm(const Dataset& data, const WeightVector& weights,
                               const KernelSpec& kernel, double c, const SolverConfig& cfg,
                               const WeightedMode& mode);

}  // namespace boostdet
