#pragma once

#include <functional>
#include <span>

#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

/// Central-difference gradient (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
/// Throws NumericalError when f returns a non-finite value.
[[nodiscard]] Vector finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> x, double eps = 1e-5);

/// |a - b| / max(|a|, |b|), zero when both are zero.
[[nodiscard]] double relative_error(double a, double b) noexcept;

}  // namespace gbtpp
