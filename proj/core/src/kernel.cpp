#include "boostdet/kernel.hpp"

#include <cmath>

#include "boostdet/error.hpp"

namespace boostdet {

KernelSpec KernelSpec::rbf(double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("RBF sigma must be > 0");
    KernelSpec k;
    k.kind = KernelKind::Rbf;
    k.sigma = sigma;
    return k;
}

KernelSpec KernelSpec::polynomial(int degree) {
    if (degree < 1) throw ConfigError("polynomial degree must be >= 1");
    KernelSpec k;
    k.kind = KernelKind::Polynomial;
    k.degree = degree;
    return k;
}

KernelSpec KernelSpec::sigmoid(double offset) {
    KernelSpec k;
    k.kind = KernelKind::Sigmoid;
    k.offset = offset;
    return k;
}

double kernel_eval(const KernelSpec& k, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("kernel arguments have different dimensions");
    switch (k.kind) {
        case KernelKind::Rbf: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                d2 += d * d;
            }
            return std::exp(-d2 / (2.0 * k.sigma * k.sigma));
        }
        case KernelKind::Polynomial: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return std::pow(dot + 1.0, k.degree);
        }
        case KernelKind::Sigmoid: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return std::tanh(dot + k.offset);
        }
    }
    throw DataError("unknown kernel kind");
}

}  // namespace boostdet
