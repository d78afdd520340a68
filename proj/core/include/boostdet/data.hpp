#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace boostdet {

// sign with sign(0) = +1, the toolkit-wide tie break
inline int sign_pm(double v) { return v >= 0.0 ? +1 : -1; }

// Labelled feature vectors, labels in {-1, +1}. Row major.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t dim) : dim_(dim) {}

    void add(std::span<const double> x, int label);
    void reserve(std::size_t n);

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }
    std::span<const double> point(std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }
    int label(std::size_t i) const { return labels_[i]; }
    bool has_both_classes() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
    std::vector<std::int8_t> labels_;
};

// Sample distribution maintained by boosting: non-negative, sums to 1.
using WeightVector = std::vector<double>;

WeightVector uniform_weights(std::size_t n);
bool weights_valid(const WeightVector& w, double tol = 1e-12);
std::vector<double> cumulative_weights(const WeightVector& w);
// index of the first cumulative entry > u (u in [0,1))
std::size_t sample_index(const std::vector<double>& cumulative, double u);

// Read access to one sample's feature values. Dense rows use DenseView;
// detection windows use WindowView (haar.hpp), which computes features on
// demand so cascade stages only pay for the features they reference.
class FeatureView {
public:
    virtual ~FeatureView() = default;
    virtual double operator[](std::size_t feature) const = 0;
    virtual std::size_t dim() const = 0;
};

class DenseView final : public FeatureView {
public:
    explicit DenseView(std::span<const double> values) : values_(values) {}
    double operator[](std::size_t feature) const override { return values_[feature]; }
    std::size_t dim() const override { return values_.size(); }

private:
    std::span<const double> values_;
};

}  // namespace boostdet
