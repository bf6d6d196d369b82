#include "gbtpp/numerics/activations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbtpp {

double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_sigmoid(double x) noexcept {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double log_sum_exp(std::span<const double> z) noexcept {
    if (z.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - m);
    return m + std::log(s);
}

void softmax_inplace(std::span<double> z) noexcept {
    if (z.empty()) return;
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double& v : z) {
        v = std::exp(v - m);
        s += v;
    }
    const double inv = 1.0 / s;
    for (double& v : z) v *= inv;
}

Vector softmax(std::span<const double> z) {
    Vector out(z.begin(), z.end());
    softmax_inplace(out);
    return out;
}

Vector relu(std::span<const double> x) {
    Vector out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return relu(v); });
    return out;
}

std::size_t argmax(std::span<const double> x) noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] > x[best]) best = i;
    }
    return best;
}

}  // namespace gbtpp
