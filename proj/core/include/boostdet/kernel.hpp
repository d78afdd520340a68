#pragma once

#include <cstdint>
#include <span>

namespace boostdet {

enum class KernelKind : std::uint8_t { Rbf = 0, Polynomial = 1, Sigmoid = 2 };

// Rbf:        K(x,y) = exp(-|x-y|^2 / (2 sigma^2))
// Polynomial: K(x,y) = (<x,y> + 1)^degree
// Sigmoid:    K(x,y) = tanh(<x,y> + offset)
struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double sigma = 1.0;
    int degree = 2;
    double offset = 0.0;

    static KernelSpec rbf(double sigma);
    static KernelSpec polynomial(int degree);
    static KernelSpec sigmoid(double offset);
};

double kernel_eval(const KernelSpec& k, std::span<const double> x, std::span<const double> y);

}  // namespace boostdet
