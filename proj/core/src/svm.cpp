#include "boostdet/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "boostdet/error.hpp"
#include "boostdet/rng.hpp"

namespace boostdet {

namespace {

// LRU cache of full kernel rows. Boosting retrains many small SVMs over the
// same vectors, so row reuse dominates solver runtime.
class KernelCache {
public:
    KernelCache(const Dataset& data, const KernelSpec& kernel, std::size_t budget)
        : data_(data), kernel_(kernel), budget_(std::max<std::size_t>(budget, 2)) {}

    const std::vector<double>& row(std::size_t i) {
        auto it = index_.find(i);
        if (it != index_.end()) {
            rows_.splice(rows_.begin(), rows_, it->second);
            return it->second->second;
        }
        if (rows_.size() >= budget_) {
            index_.erase(rows_.back().first);
            rows_.pop_back();
        }
        rows_.emplace_front(i, std::vector<double>(data_.size()));
        std::vector<double>& r = rows_.front().second;
        const auto xi = data_.point(i);
        for (std::size_t j = 0; j < data_.size(); ++j)
            r[j] = kernel_eval(kernel_, xi, data_.point(j));
        index_[i] = rows_.begin();
        return r;
    }

private:
    const Dataset& data_;
    const KernelSpec& kernel_;
    std::size_t budget_;
    std::list<std::pair<std::size_t, std::vector<double>>> rows_;
    std::unordered_map<std::size_t, decltype(rows_)::iterator> index_;
};

}  // namespace

RbfSvmModel train_svm_boxed(const Dataset& data, const KernelSpec& kernel,
                            std::span<const double> box, const SolverConfig& cfg) {
    const std::size_t n = data.size();
    if (n < 2) throw DataError("training needs at least two samples");
    if (box.size() != n) throw DataError("box constraint size does not match dataset");
    if (!(cfg.kkt_tolerance > 0.0)) throw ConfigError("kkt_tolerance must be > 0");
    bool free_pos = false, free_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(box[i] >= 0.0)) throw ConfigError("box constraints must be >= 0");
        if (box[i] > 0.0) (data.label(i) > 0 ? free_pos : free_neg) = true;
    }
    if (!free_pos || !free_neg)
        throw DataError("training data must contain both classes with positive weight");

    KernelCache cache(data, kernel, cfg.cache_budget);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> u(n, 0.0);  // u_i = sum_j y_j alpha_j K_ij
    const double tol = cfg.kkt_tolerance;

    auto grad = [&](std::size_t i) { return data.label(i) - u[i]; };
    auto in_up = [&](std::size_t i) {
        return (data.label(i) > 0 && alpha[i] < box[i]) || (data.label(i) < 0 && alpha[i] > 0.0);
    };
    auto in_low = [&](std::size_t i) {
        return (data.label(i) < 0 && alpha[i] < box[i]) || (data.label(i) > 0 && alpha[i] > 0.0);
    };

    // proposed update on a pair: the new alpha_j and the dual-objective gain
    struct PairStep {
        double aj_new = 0.0;
        double gain = 0.0;
    };
    auto plan_step = [&](std::size_t i, std::size_t j, const std::vector<double>& ki,
                         const std::vector<double>& kj) -> PairStep {
        const int yi = data.label(i);
        const int yj = data.label(j);
        const double s = yi * yj;
        double low, high;
        if (yi != yj) {
            low = std::max(0.0, alpha[j] - alpha[i]);
            high = std::min(box[j], box[i] + alpha[j] - alpha[i]);
        } else {
            low = std::max(0.0, alpha[i] + alpha[j] - box[i]);
            high = std::min(box[j], alpha[i] + alpha[j]);
        }
        if (!(high > low)) return {alpha[j], 0.0};
        auto gain_at = [&](double aj_cand) {
            const double dj = aj_cand - alpha[j];
            const double di = s * (alpha[j] - aj_cand);
            return di + dj - yi * di * u[i] - yj * dj * u[j] - 0.5 * di * di * ki[i] -
                   0.5 * dj * dj * kj[j] - s * di * dj * ki[j];
        };
        const double eta = ki[i] + kj[j] - 2.0 * ki[j];
        double aj_new;
        if (eta > 1e-12) {
            aj_new = std::clamp(alpha[j] + yj * ((u[i] - yi) - (u[j] - yj)) / eta, low, high);
        } else {
            // flat or indefinite direction: the optimum sits at an end
            aj_new = gain_at(low) >= gain_at(high) ? low : high;
        }
        return {aj_new, gain_at(aj_new)};
    };
    auto apply_step = [&](std::size_t i, std::size_t j, double aj_new,
                          const std::vector<double>& ki, const std::vector<double>& kj) {
        const int yi = data.label(i);
        const int yj = data.label(j);
        const double dj = aj_new - alpha[j];
        const double di = yi * yj * (alpha[j] - aj_new);
        alpha[i] = std::clamp(alpha[i] + di, 0.0, box[i]);
        alpha[j] = aj_new;
        for (std::size_t a = 0; a < n; ++a) u[a] += yi * di * ki[a] + yj * dj * kj[a];
    };

    const long long max_iters =
        static_cast<long long>(std::max(cfg.max_passes, 0)) * static_cast<long long>(n);
    bool converged = false;
    for (long long iter = 0; iter < max_iters; ++iter) {
        // maximal violating pair
        double m = -std::numeric_limits<double>::infinity();
        double mm = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t a = 0; a < n; ++a) {
            const double g = grad(a);
            if (in_up(a) && g > m) {
                m = g;
                i = a;
            }
            if (in_low(a) && g < mm) {
                mm = g;
                j = a;
            }
        }
        if (i >= n || j >= n || m - mm <= tol) {
            converged = true;
            break;
        }

        PairStep step = plan_step(i, j, cache.row(i), cache.row(j));
        if (step.gain <= 1e-18 || step.aj_new == alpha[j]) {
            // the top pair is pinned by its box; fall back to the best
            // feasible pair overall (rare, only near degenerate geometry)
            double best_gain = 1e-18;
            std::size_t bi = n, bj = n;
            double best_aj = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                if (!in_up(a)) continue;
                for (std::size_t b = 0; b < n; ++b) {
                    if (b == a || !in_low(b)) continue;
                    if (grad(a) - grad(b) <= tol) continue;  // not a violating pair
                    const PairStep cand = plan_step(a, b, cache.row(a), cache.row(b));
                    if (cand.gain > best_gain && cand.aj_new != alpha[b]) {
                        best_gain = cand.gain;
                        bi = a;
                        bj = b;
                        best_aj = cand.aj_new;
                    }
                }
            }
            if (bi >= n) break;  // no pair can improve: stuck, flagged below
            apply_step(bi, bj, best_aj, cache.row(bi), cache.row(bj));
            continue;
        }
        apply_step(i, j, step.aj_new, cache.row(i), cache.row(j));
    }

    // bias from the final gradient window
    double m = -std::numeric_limits<double>::infinity();
    double mm = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
        const double g = grad(a);
        if (in_up(a)) m = std::max(m, g);
        if (in_low(a)) mm = std::min(mm, g);
    }
    double bias = 0.0;
    if (std::isfinite(m) && std::isfinite(mm)) bias = 0.5 * (m + mm);
    else if (std::isfinite(m)) bias = m;
    else if (std::isfinite(mm)) bias = mm;

    RbfSvmModel model;
    model.kernel = kernel;
    model.dim = data.dim();
    model.bias = bias;
    model.converged = converged;
    double max_box = 0.0;
    for (std::size_t a = 0; a < n; ++a) max_box = std::max(max_box, box[a]);
    model.c = max_box;
    for (std::size_t a = 0; a < n; ++a) {
        if (alpha[a] > 1e-12) {
            const auto p = data.point(a);
            model.support_vectors.emplace_back(p.begin(), p.end());
            model.dual_coefs.push_back(data.label(a) * alpha[a]);
        }
    }
    return model;
}

RbfSvmModel train_svm(const Dataset& data, const KernelSpec& kernel, double c,
                      const SolverConfig& cfg) {
    if (!(c > 0.0)) throw ConfigError("regularization C must be > 0");
    if (!data.has_both_classes()) throw DataError("training data must contain both classes");
    std::vector<double> box(data.size(), c);
    RbfSvmModel model = train_svm_boxed(data, kernel, box, cfg);
    model.c = c;
    return model;
}

double svm_decision(const RbfSvmModel& m, std::span<const double> x) {
    if (x.size() != m.dim) throw DataError("input dimension does not match model");
    double f = m.bias;
    for (std::size_t j = 0; j < m.support_vectors.size(); ++j)
        f += m.dual_coefs[j] * kernel_eval(m.kernel, m.support_vectors[j], x);
    return f;
}

int svm_predict(const RbfSvmModel& m, std::span<const double> x) {
    return sign_pm(svm_decision(m, x));
}

double svm_dual_objective(const RbfSvmModel& m) {
    double obj = 0.0;
    for (const double c : m.dual_coefs) obj += std::abs(c);
    for (std::size_t a = 0; a < m.support_vectors.size(); ++a)
        for (std::size_t b = 0; b < m.support_vectors.size(); ++b)
            obj -= 0.5 * m.dual_coefs[a] * m.dual_coefs[b] *
                   kernel_eval(m.kernel, m.support_vectors[a], m.support_vectors[b]);
    return obj;
}

RbfSvmModel train_weighted_svm(const Dataset& data, const WeightVector& weights,
                               const KernelSpec& kernel, double c, const SolverConfig& cfg,
                               const WeightedMode& mode) {
    if (weights.size() != data.size()) throw DataError("weight vector size does not match data");
    if (!weights_valid(weights, 1e-9)) throw DataError("weights must be non-negative and sum to 1");

    if (const auto* rs = std::get_if<ResampleMode>(&mode)) {
        if (rs->n < 2) throw ConfigError("resample size must be >= 2");
        Rng rng(rs->seed);
        const auto cum = cumulative_weights(weights);
        for (int attempt = 0; attempt < 10; ++attempt) {
            Dataset sample(data.dim());
            sample.reserve(rs->n);
            for (std::size_t k = 0; k < rs->n; ++k) {
                const std::size_t idx = sample_index(cum, rng.uniform());
                sample.add(data.point(idx), data.label(idx));
            }
            if (!sample.has_both_classes()) continue;
            RbfSvmModel model = train_svm(sample, kernel, c, cfg);
            model.resample_seed = rs->seed;
            return model;
        }
        throw DataError("resampling produced a single class in 10 consecutive draws");
    }

    // Reweight: per-sample bounds C_i = C * N * w_i
    std::vector<double> box(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        box[i] = c * static_cast<double>(data.size()) * weights[i];
    RbfSvmModel model = train_svm_boxed(data, kernel, box, cfg);
    model.c = c;
    return model;
}

}  // namespace boostdet
