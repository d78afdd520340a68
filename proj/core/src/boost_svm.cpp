#include "boostdet/boost_svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "boostdet/error.hpp"

namespace boostdet {

SigmaSchedule default_sigma_schedule(const Dataset& data, std::uint64_t seed) {
    const std::size_t n = data.size();
    if (n < 2) throw DataError("need at least two samples to derive a sigma schedule");
    Rng rng(split_seed(seed, 0x5153));
    std::vector<std::size_t> pick(std::min<std::size_t>(n, 200));
    if (pick.size() == n) {
        std::iota(pick.begin(), pick.end(), std::size_t{0});
    } else {
        for (auto& p : pick) p = rng.below(n);
    }
    std::vector<double> dists;
    dists.reserve(pick.size() * (pick.size() - 1) / 2);
    for (std::size_t a = 0; a < pick.size(); ++a) {
        const auto xa = data.point(pick[a]);
        for (std::size_t b = a + 1; b < pick.size(); ++b) {
            const auto xb = data.point(pick[b]);
            double d2 = 0.0;
            for (std::size_t j = 0; j < xa.size(); ++j) {
                const double d = xa[j] - xb[j];
                d2 += d * d;
            }
            dists.push_back(std::sqrt(d2));
        }
    }
    std::sort(dists.begin(), dists.end());
    double median = dists.empty() ? 1.0 : dists[dists.size() / 2];
    if (!(median > 0.0)) median = 1.0;

    SigmaSchedule s;
    s.sigma_ini = 10.0 * median;
    s.sigma_min = 0.1 * median;
    s.sigma_step = (s.sigma_ini - s.sigma_min) / 20.0;
    return s;
}

ComponentClassifier make_svm_component(const Dataset& data, const WeightVector& w, double sigma,
                                       const BoostSvmConfig& cfg, const StumpTrainer* sorter) {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
    const std::size_t dim = data.dim();
    const std::size_t d = cfg.feature_subset_size;

    SvmComponent component;
    const bool identity = d == 0 || d >= dim;
    if (identity) {
        component.feature_subset.resize(dim);
        std::iota(component.feature_subset.begin(), component.feature_subset.end(), 0u);
    } else {
        // image mode: keep the d features a stump would pick first
        std::vector<double> errs(dim);
        if (sorter) {
            for (std::size_t f = 0; f < dim; ++f) errs[f] = sorter->column_best_error(f, w);
        } else {
            StumpTrainer local(data);
            for (std::size_t f = 0; f < dim; ++f) errs[f] = local.column_best_error(f, w);
        }
        std::vector<std::uint32_t> ids(dim);
        std::iota(ids.begin(), ids.end(), 0u);
        std::stable_sort(ids.begin(), ids.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return errs[a] < errs[b]; });
        component.feature_subset.assign(ids.begin(), ids.begin() + d);
        std::sort(component.feature_subset.begin(), component.feature_subset.end());
    }

    const Dataset* train_data = &data;
    Dataset projected(component.feature_subset.size());
    if (!identity) {
        projected.reserve(data.size());
        std::vector<double> row(component.feature_subset.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto p = data.point(i);
            for (std::size_t k = 0; k < row.size(); ++k) row[k] = p[component.feature_subset[k]];
            projected.add(row, data.label(i));
        }
        train_data = &projected;
    }

    std::size_t n = cfg.resample_n ? cfg.resample_n : std::min<std::size_t>(data.size(), 1000);
    n = std::max<std::size_t>(n, 2);
    component.model = train_weighted_svm(*train_data, w, KernelSpec::rbf(sigma), cfg.c,
                                         cfg.solver, ResampleMode{n, cfg.seed});
    return component;
}

std::string round_log_csv(const std::vector<SvmRoundLog>& log) {
    std::string out = "t,sigma,epsilon,alpha,status,resample_seed\n";
    char buf[160];
    for (const auto& row : log) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%s,%llu\n", row.t, row.sigma,
                      row.epsilon, row.alpha, row.accepted ? "accepted" : "rejected",
                      static_cast<unsigned long long>(row.resample_seed));
        out += buf;
    }
    return out;
}

AdaBoostSvmResult run_adaboost_svm(const Dataset& data, const BoostSvmConfig& cfg) {
    if (data.size() < 2 || !data.has_both_classes())
        throw DataError("AdaBoostSVM needs both classes present");
    if (cfg.t_max < 1) throw ConfigError("t_max must be >= 1");
    SigmaSchedule sched =
        cfg.schedule.configured() ? cfg.schedule : default_sigma_schedule(data, cfg.seed);
    if (!(sched.sigma_min < sched.sigma_ini))
        throw ConfigError("sigma_min must be below sigma_ini");
    if (!(sched.sigma_step > 0.0)) throw ConfigError("sigma_step must be > 0");

    AdaBoostSvmResult out;
    WeightVector w = uniform_weights(data.size());
    double sigma = sched.sigma_ini;
    int t = 1;
    int stalled = 0;
    std::uint64_t attempt = 0;

    while (sigma > sched.sigma_min && t <= cfg.t_max) {
        BoostSvmConfig attempt_cfg = cfg;
        attempt_cfg.seed = split_seed(cfg.seed, ++attempt);

        ComponentClassifier h = make_svm_component(data, w, sigma, attempt_cfg);
        const double eps = weighted_error(h, data, w);

        SvmRoundLog row;
        row.t = t;
        row.sigma = sigma;
        row.epsilon = eps;
        row.alpha = alpha_of(eps);
        row.resample_seed = attempt_cfg.seed;

        if (eps > 0.5) {
            // the rejection rule: shrink sigma, retrain, no round recorded
            row.accepted = false;
            out.log.push_back(row);
            sigma -= sched.sigma_step;
            continue;
        }

        row.accepted = true;
        out.log.push_back(row);

        BoostRound round;
        round.t = t;
        round.epsilon = eps;
        round.alpha = alpha_of(eps, &round.alpha_clamped);
        round.learner_id = out.classifier.rounds.size();
        out.classifier.rounds.push_back({round.alpha, std::move(h)});

        if (eps == 0.0) {
            round.normalizer = std::exp(-round.alpha);
            round.weight_sum = 1.0;
            out.rounds.push_back(round);
            break;
        }
        round.normalizer =
            update_weights(w, round.alpha, out.classifier.rounds.back().h, data);
        round.weight_sum = std::accumulate(w.begin(), w.end(), 0.0);
        out.rounds.push_back(round);
        ++t;

        if (round.alpha == 0.0) {
            // eps == 0.5 exactly is accepted, but three stalls in a row force
            // a sigma decrement to break the loop
            if (++stalled >= 3) {
                sigma -= sched.sigma_step;
                stalled = 0;
            }
        } else {
            stalled = 0;
        }
    }

    if (out.rounds.empty())
        throw TrainError("schedule exhausted: no round accepted before sigma_min");

    out.sigma_final = sigma;
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

}  // namespace boostdet
