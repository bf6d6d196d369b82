#pragma once

#include <span>

#include "gbtpp/model/params.hpp"
#include "gbtpp/numerics/quadrature.hpp"

namespace gbtpp {

// The intensity is lambda(t) = exp(c + w (t - t_prev)) with
// c = v_h . h + v_y . y + b_t. Its density has the closed form
//   log f = c + w d - e^c (e^{w d} - 1) / w,    d = t - t_prev,
// and f = e^c exp(-e^c d) in the w -> 0 limit (used for |w| < kFlatSlope).

inline constexpr double kFlatSlope = 1e-8;
inline constexpr double kMaxExponent = 700.0;

/// c = v_h . h + v_y . y + b_t
[[nodiscard]] double time_exponent(const GbtppParams& p, std::span<const double> h, std::span<const double> y);

/// Throws NumericalError "intensity overflow" when the exponent exceeds 700.
[[nodiscard]] double intensity(const GbtppParams& p, std::span<const double> h, std::span<const double> y,
                               double t, double t_prev);
[[nodiscard]] double time_density(const GbtppParams& p, std::span<const double> h, std::span<const double> y,
                                  double t, double t_prev);

/// Scalar forms in (c, w, d = t - t_prev).
[[nodiscard]] double log_intensity_checked(double c, double w, double d);
/// Integrated intensity e^c (e^{w d} - 1) / w.
[[nodiscard]] double compensator(double c, double w, double d);
[[nodiscard]] double log_time_density(double c, double w, double d);
[[nodiscard]] double time_density(double c, double w, double d);

/// Negative log density and its partial derivatives in c and w.
struct TimeNll {
    double value = 0.0;
    double d_c = 0.0;
    double d_w = 0.0;
};
[[nodiscard]] TimeNll time_nll(double c, double w, double d);

/// Elapsed time d at which the survival function exp(-compensator) falls below
/// `survival_tol`. Throws NumericalError "non-integrable tail" if it never
/// does (w < 0 with too little total mass).
[[nodiscard]] double survival_cutoff(double c, double w, double survival_tol = 1e-9);

/// E[d] = integral of d f(d) over [0, inf), by quadrature on [0, survival_cutoff].
[[nodiscard]] double expected_elapsed(double c, double w, double survival_tol = 1e-9);

/// Integral of f over [0, inf) by quadrature (close to 1 for w >= 0).
[[nodiscard]] double density_mass(double c, double w, double survival_tol = 1e-9);

}  // namespace gbtpp
