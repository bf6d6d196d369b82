#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace gbtpp {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    /// The window [a, a + T_cut] is grown until the integrand falls below this.
    double tail_tol = 1e-12;
    double initial_window = 1.0;
    double max_window = 1e15;
    /// Caller-supplied cut-off (e.g. from a closed-form survival function).
    std::optional<double> window;
    std::size_t panels = 32;
    int max_depth = 48;
};

using Integrand = std::function<double(double)>;

/// Adaptive Simpson on [a, b] with Richardson correction.
[[nodiscard]] double adaptive_simpson(const Integrand& f, double a, double b, double abs_tol,
                                      int max_depth = 48);

/// Integral of a nonnegative, eventually decaying f over [a, inf), evaluated
/// as composite adaptive Simpson over [a, a + T_cut]. Throws NumericalError
/// "non-integrable tail" if no admissible T_cut is found below max_window.
[[nodiscard]] double integrate_1d(const Integrand& f, double a, const QuadratureConfig& cfg = {});

}  // namespace gbtpp
