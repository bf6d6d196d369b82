#pragma once

#include <cstddef>

#include "gbtpp/error.hpp"
#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

struct PowerIterationConfig {
    double tolerance = 1e-10;
    std::size_t max_iterations = 10'000;
};

/// Raised when power iteration does not settle; carries the last estimate.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double last_estimate)
        : NumericalError(what), last_estimate_(last_estimate) {}
    [[nodiscard]] double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

/// Largest eigenvalue magnitude of a square (intended: nonnegative) matrix by
/// power iteration from the all-ones start vector.
[[nodiscard]] double spectral_radius(const DenseMatrix& a, const PowerIterationConfig& cfg = {});

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws NumericalError when A is singular to working precision.
[[nodiscard]] Vector solve_linear(DenseMatrix a, Vector b);

}  // namespace gbtpp
