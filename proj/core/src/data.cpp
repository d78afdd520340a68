#include "boostdet/data.hpp"

#include <algorithm>

#include "boostdet/error.hpp"

namespace boostdet {

void Dataset::add(std::span<const double> x, int label) {
    if (x.size() != dim_) throw DataError("sample dimension does not match dataset");
    if (label != 1 && label != -1) throw DataError("label must be +1 or -1");
    values_.insert(values_.end(), x.begin(), x.end());
    labels_.push_back(static_cast<std::int8_t>(label));
}

void Dataset::reserve(std::size_t n) {
    values_.reserve(n * dim_);
    labels_.reserve(n);
}

bool Dataset::has_both_classes() const {
    bool pos = false, neg = false;
    for (const auto l : labels_) {
        if (l > 0) pos = true;
        else neg = true;
    }
    return pos && neg;
}

WeightVector uniform_weights(std::size_t n) {
    return WeightVector(n, n ? 1.0 / static_cast<double>(n) : 0.0);
}

bool weights_valid(const WeightVector& w, double tol) {
    double sum = 0.0;
    for (const double v : w) {
        if (!(v >= 0.0)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

std::vector<double> cumulative_weights(const WeightVector& w) {
    std::vector<double> cum(w.size());
    double run = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        run += w[i];
        cum[i] = run;
    }
    if (!cum.empty()) cum.back() = run > 0.0 ? run : 1.0;
    return cum;
}

std::size_t sample_index(const std::vector<double>& cumulative, double u) {
    const double target = u * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
    return i < cumulative.size() ? i : cumulative.size() - 1;
}

}  // namespace boostdet
