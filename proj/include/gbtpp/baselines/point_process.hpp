#pragma once

#include <span>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/core/samples.hpp"

namespace gbtpp {

// Time-only baselines. Each predicts the next event time of a prefix
// (history followed by the current event).

/// Homogeneous Poisson: constant rate lambda0 = 1 / mean gap.
struct PoissonModel {
    double lambda0 = 1.0;
};

/// Throws ValidationError when there is no gap or every gap is zero.
[[nodiscard]] PoissonModel fit_poisson(std::span<const PropagationSample> samples);
[[nodiscard]] PoissonModel fit_poisson_gaps(std::span<const double> gaps);
[[nodiscard]] double predict_time_poisson(const PoissonModel& m, std::span<const Event> prefix);

/// Univariate Hawkes with kernel exp(-beta (t - t_j)):
///   lambda(t) = gamma0 + alpha * sum_{t_j < t} exp(-beta (t - t_j)).
struct HawkesModel {
    double gamma0 = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
};

struct HawkesFitConfig {
    std::vector<double> beta_grid{0.1, 1.0, 10.0};
    std::size_t max_iterations = 500;
    double tolerance = 1e-9;
};

/// Log-likelihood of event `times` (ascending) observed on [t0, T]. The first
/// `n_condition` events only excite; they contribute no log-intensity term.
[[nodiscard]] double hawkes_log_likelihood(const HawkesModel& m, std::span<const double> times, double t0, double T,
                                           std::size_t n_condition = 0);

/// Sum over cascades of the log-likelihood on [t_first, t_last], conditioning
/// on each cascade's first event.
[[nodiscard]] double hawkes_cascade_log_likelihood(const HawkesModel& m, std::span<const Cascade> cascades);

/// Maximum likelihood over (gamma0, alpha) >= 0 by projected Newton ascent for
/// every beta of the grid; keeps the best beta. Throws NumericalError (with the
/// best iterate in the message) if the ascent does not settle.
[[nodiscard]] HawkesModel fit_hawkes(std::span<const Cascade> cascades, const HawkesFitConfig& cfg = {});
/// Fit for one fixed beta starting from (mean rate, 0).
[[nodiscard]] HawkesModel fit_hawkes_fixed_beta(std::span<const Cascade> cascades, double beta,
                                                const HawkesFitConfig& cfg = {});

/// t_current + E[elapsed] under the Hawkes density given the prefix times.
[[nodiscard]] double predict_time_hawkes(const HawkesModel& m, std::span<const Event> prefix);

/// Self-correcting process lambda(t) = exp(mu (t - t0) - alpha * #{t_i < t}),
/// t0 the cascade's first event.
struct ScpModel {
    double mu = 1.0;
    double alpha = 1.0;
};

struct ScpFitConfig {
    std::size_t grid_points = 25;
    /// Grid bounds for mu * mean_gap and alpha (log-spaced).
    double mu_lo = 1e-3, mu_hi = 1e2;
    double alpha_lo = 1e-3, alpha_hi = 1e2;
    double refine_tolerance = 1e-7;
};

/// Sum over cascades of the log-likelihood on [t_first, t_last], conditioning
/// on the first event. Returns -inf when an exponent overflows.
[[nodiscard]] double scp_log_likelihood(const ScpModel& m, std::span<const Cascade> cascades);
[[nodiscard]] ScpModel fit_scp(std::span<const Cascade> cascades, const ScpFitConfig& cfg = {});
[[nodiscard]] double predict_time_scp(const ScpModel& m, std::span<const Event> prefix);

}  // namespace gbtpp
