#pragma once

#include <span>

#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

/// Numerically stable logistic function.
[[nodiscard]] double sigmoid(double x) noexcept;

/// log(sigmoid(x)) without overflow or underflow to -inf for moderate x.
[[nodiscard]] double log_sigmoid(double x) noexcept;

/// Softmax with max subtraction. Output has the same length as the input.
[[nodiscard]] Vector softmax(std::span<const double> z);
void softmax_inplace(std::span<double> z) noexcept;

/// log-sum-exp with max subtraction.
[[nodiscard]] double log_sum_exp(std::span<const double> z) noexcept;

[[nodiscard]] Vector relu(std::span<const double> x);
[[nodiscard]] inline double relu(double x) noexcept { return x > 0.0 ? x : 0.0; }

/// Index of the largest entry; ties resolve to the lowest index.
[[nodiscard]] std::size_t argmax(std::span<const double> x) noexcept;

}  // namespace gbtpp
