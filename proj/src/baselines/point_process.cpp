#include "gbtpp/baselines/point_process.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "gbtpp/error.hpp"
#include "gbtpp/model/time_density.hpp"
#include "gbtpp/numerics/quadrature.hpp"
#include "gbtpp/util/format.hpp"

namespace gbtpp {
namespace {

constexpr double kSurvivalTol = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// E[elapsed] for a density lambda(d) exp(-Lambda(d)) with increasing Lambda
// that reaches -log(kSurvivalTol) no later than `upper`.
double expected_elapsed_general(const std::function<double(double)>& rate,
                                const std::function<double(double)>& comp, double upper) {
    const double target = -std::log(kSurvivalTol);
    if (!(comp(upper) >= target)) throw NumericalError("non-integrable tail: survival stays above tolerance");
    double lo = 0.0, hi = upper;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (comp(mid) >= target ? hi : lo) = mid;
    }
    QuadratureConfig q;
    q.window = hi;
    q.abs_tol = 1e-10 * hi;
    return integrate_1d([&](double d) { return d * rate(d) * std::exp(-comp(d)); }, 0.0, q);
}

// Pooled sufficient statistics of the conditioned Hawkes likelihood for one
// beta: LL = sum_i log(gamma0 + alpha r_i) - gamma0 a - alpha b.
struct HawkesStats {
    std::vector<double> r;
    double a = 0.0;
    double b = 0.0;
};

HawkesStats hawkes_stats(std::span<const Cascade> cascades, double beta) {
    HawkesStats s;
    for (const auto& c : cascades) {
        const auto& ev = c.events;
        if (ev.size() < 2) continue;
        double rec = 0.0;
        for (std::size_t i = 1; i < ev.size(); ++i) {
            rec = std::exp(-beta * (ev[i].time - ev[i - 1].time)) * (1.0 + rec);
            s.r.push_back(rec);
        }
        const double T = ev.back().time;
        s.a += T - ev.front().time;
        for (std::size_t j = 0; j + 1 < ev.size(); ++j) s.b += -std::expm1(-beta * (T - ev[j].time)) / beta;
    }
    return s;
}

double stats_ll(const HawkesStats& s, double g0, double al) {
    double ll = -g0 * s.a - al * s.b;
    for (double r : s.r) {
        const double lam = g0 + al * r;
        if (!(lam > 0.0)) return kNegInf;
        ll += std::log(lam);
    }
    return ll;
}

}  // namespace

PoissonModel fit_poisson_gaps(std::span<const double> gaps) {
    if (gaps.empty()) throw ValidationError("Poisson fit needs at least one gap");
    double total = 0.0;
    for (double g : gaps) total += g;
    if (!(total > 0.0)) throw ValidationError("Poisson fit: all gaps are zero");
    return {static_cast<double>(gaps.size()) / total};
}

PoissonModel fit_poisson(std::span<const PropagationSample> samples) {
    std::vector<double> gaps;
    gaps.reserve(samples.size());
    for (const auto& s : samples) gaps.push_back(s.label_time() - s.current().time);
    return fit_poisson_gaps(gaps);
}

double predict_time_poisson(const PoissonModel& m, std::span<const Event> prefix) {
    return prefix.back().time + 1.0 / m.lambda0;
}

double hawkes_log_likelihood(const HawkesModel& m, std::span<const double> times, double t0, double T,
                             std::size_t n_condition) {
    double ll = -m.gamma0 * (T - t0);
    double rec = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0) rec = std::exp(-m.beta * (times[i] - times[i - 1])) * (1.0 + rec);
        if (i >= n_condition) {
            const double lam = m.gamma0 + m.alpha * rec;
            if (!(lam > 0.0)) return kNegInf;
            ll += std::log(lam);
        }
        ll -= m.alpha * -std::expm1(-m.beta * (T - times[i])) / m.beta;
    }
    return ll;
}

double hawkes_cascade_log_likelihood(const HawkesModel& m, std::span<const Cascade> cascades) {
    return stats_ll(hawkes_stats(cascades, m.beta), m.gamma0, m.alpha);
}

HawkesModel fit_hawkes_fixed_beta(std::span<const Cascade> cascades, double beta, const HawkesFitConfig& cfg) {
    if (!(beta > 0.0)) throw ValidationError("Hawkes beta must be positive");
    const HawkesStats s = hawkes_stats(cascades, beta);
    if (s.r.empty() || !(s.a > 0.0)) throw ValidationError("Hawkes fit needs cascades with positive duration");

    const double rate = static_cast<double>(s.r.size()) / s.a;
    const double floor = 1e-9 * rate;
    std::array<double, 2> x{rate, 0.0};
    const std::array<double, 2> lower{floor, 0.0};
    double ll = stats_ll(s, x[0], x[1]);

    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        double g0 = -s.a, g1 = -s.b, h00 = 0.0, h01 = 0.0, h11 = 0.0;
        for (double r : s.r) {
            const double inv = 1.0 / (x[0] + x[1] * r);
            g0 += inv;
            g1 += r * inv;
            h00 += inv * inv;
            h01 += r * inv * inv;
            h11 += r * r * inv * inv;
        }
        // Coordinates pinned at their bound with the gradient pushing outward stay put.
        const bool free0 = !(x[0] <= lower[0] && g0 < 0.0);
        const bool free1 = !(x[1] <= lower[1] && g1 < 0.0);
        std::array<double, 2> dir{0.0, 0.0};
        const double det = h00 * h11 - h01 * h01;
        if (free0 && free1 && det > 1e-300) {
            // -H is positive definite: dir = (-H)^{-1} g
            dir[0] = (h11 * g0 - h01 * g1) / det;
            dir[1] = (h00 * g1 - h01 * g0) / det;
        } else {
            if (free0 && h00 > 0.0) dir[0] = g0 / h00;
            if (free1 && h11 > 0.0) dir[1] = g1 / h11;
        }
        if (dir[0] == 0.0 && dir[1] == 0.0) return {x[0], x[1], beta};

        double step = 1.0;
        bool moved = false;
        std::array<double, 2> next{};
        double next_ll = ll;
        for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
            next = {std::max(lower[0], x[0] + step * dir[0]), std::max(lower[1], x[1] + step * dir[1])};
            next_ll = stats_ll(s, next[0], next[1]);
            const double gain = g0 * (next[0] - x[0]) + g1 * (next[1] - x[1]);
            if (next_ll >= ll + 1e-4 * gain) {
                moved = true;
                break;
            }
        }
        if (!moved) return {x[0], x[1], beta};
        const double change = std::abs(next[0] - x[0]) / (1.0 + x[0]) + std::abs(next[1] - x[1]) / (1.0 + x[1]);
        x = next;
        ll = next_ll;
        if (change < cfg.tolerance) return {x[0], x[1], beta};
    }
    throw NumericalError("Hawkes fit did not converge (beta " + format_double(beta) + ", best gamma0 " +
                         format_double(x[0]) + ", alpha " + format_double(x[1]) + ")");
}

HawkesModel fit_hawkes(std::span<const Cascade> cascades, const HawkesFitConfig& cfg) {
    if (cascades.empty()) throw ValidationError("Hawkes fit needs at least one cascade");
    if (cfg.beta_grid.empty()) throw ValidationError("Hawkes beta grid is empty");
    HawkesModel best;
    double best_ll = kNegInf;
    for (double beta : cfg.beta_grid) {
        const HawkesModel m = fit_hawkes_fixed_beta(cascades, beta, cfg);
        const double ll = hawkes_cascade_log_likelihood(m, cascades);
        if (ll > best_ll) {
            best_ll = ll;
            best = m;
        }
    }
    return best;
}

double predict_time_hawkes(const HawkesModel& m, std::span<const Event> prefix) {
    if (!(m.gamma0 > 0.0)) throw NumericalError("non-integrable tail: Hawkes base rate is zero");
    const double t = prefix.back().time;
    double r = 0.0;
    for (const auto& e : prefix) r += std::exp(-m.beta * (t - e.time));
    const double ar = m.alpha * r;
    const auto rate = [&](double d) { return m.gamma0 + ar * std::exp(-m.beta * d); };
    const auto comp = [&](double d) { return m.gamma0 * d - ar * std::expm1(-m.beta * d) / m.beta; };
    const double upper = -std::log(kSurvivalTol) / m.gamma0;
    return t + expected_elapsed_general(rate, comp, upper);
}

double scp_log_likelihood(const ScpModel& m, std::span<const Cascade> cascades) {
    double ll = 0.0;
    for (const auto& c : cascades) {
        const auto& ev = c.events;
        const double t0 = ev.front().time;
        for (std::size_t i = 1; i < ev.size(); ++i) {
            const double s_prev = ev[i - 1].time - t0;
            const double s_cur = ev[i].time - t0;
            const double n = static_cast<double>(i);  // events strictly before ev[i]
            const double log_lam = m.mu * s_cur - m.alpha * n;
            if (log_lam > kMaxExponent) return kNegInf;
            ll += log_lam - std::exp(m.mu * s_prev - m.alpha * n) * std::expm1(m.mu * (s_cur - s_prev)) / m.mu;
        }
    }
    return std::isfinite(ll) ? ll : kNegInf;
}

ScpModel fit_scp(std::span<const Cascade> cascades, const ScpFitConfig& cfg) {
    if (cascades.empty()) throw ValidationError("SCP fit needs at least one cascade");
    double gap_total = 0.0;
    std::size_t gaps = 0;
    for (const auto& c : cascades) {
        gap_total += c.events.back().time - c.events.front().time;
        gaps += c.events.size() - 1;
    }
    if (gaps == 0 || !(gap_total > 0.0)) throw ValidationError("SCP fit needs cascades with positive duration");
    const double mean_gap = gap_total / static_cast<double>(gaps);

    const auto ll_at = [&](double lmu, double lal) {
        return scp_log_likelihood({std::exp(lmu), std::exp(lal)}, cascades);
    };
    const double mu_lo = std::log(cfg.mu_lo / mean_gap), mu_hi = std::log(cfg.mu_hi / mean_gap);
    const double al_lo = std::log(cfg.alpha_lo), al_hi = std::log(cfg.alpha_hi);
    const std::size_t n = std::max<std::size_t>(2, cfg.grid_points);
    const double dmu = (mu_hi - mu_lo) / static_cast<double>(n - 1);
    const double dal = (al_hi - al_lo) / static_cast<double>(n - 1);

    double best_mu = mu_lo, best_al = al_lo, best = kNegInf;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lmu = mu_lo + dmu * static_cast<double>(i);
            const double lal = al_lo + dal * static_cast<double>(j);
            const double ll = ll_at(lmu, lal);
            if (ll > best) {
                best = ll;
                best_mu = lmu;
                best_al = lal;
            }
        }
    }
    if (!std::isfinite(best)) throw NumericalError("SCP fit: likelihood is not finite anywhere on the grid");

    // Compass search in log space, confined to the grid box.
    double step_mu = dmu, step_al = dal;
    for (int iter = 0; iter < 100000 && (step_mu > cfg.refine_tolerance || step_al > cfg.refine_tolerance); ++iter) {
        bool improved = false;
        const std::array<std::array<double, 2>, 4> moves{{{step_mu, 0}, {-step_mu, 0}, {0, step_al}, {0, -step_al}}};
        for (const auto& mv : moves) {
            const double lmu = std::clamp(best_mu + mv[0], mu_lo, mu_hi);
            const double lal = std::clamp(best_al + mv[1], al_lo, al_hi);
            const double ll = ll_at(lmu, lal);
            if (ll > best) {
                best = ll;
                best_mu = lmu;
                best_al = lal;
                improved = true;
            }
        }
        if (!improved) {
            step_mu *= 0.5;
            step_al *= 0.5;
        }
    }
    return {std::exp(best_mu), std::exp(best_al)};
}

double predict_time_scp(const ScpModel& m, std::span<const Event> prefix) {
    const double t = prefix.back().time;
    const double c = m.mu * (t - prefix.front().time) - m.alpha * static_cast<double>(prefix.size());
    // Beyond this the next event is immediate to double precision.
    if (c > kMaxExponent) return t;
    return t + expected_elapsed(c, m.mu);
}

}  // namespace gbtpp
