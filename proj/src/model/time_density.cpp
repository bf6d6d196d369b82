#include "gbtpp/model/time_density.hpp"

#include <cmath>
#include <string>

#include "gbtpp/error.hpp"
#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp {
namespace {

// (e^{wd} - 1) / w and its derivative in w.
double growth(double w, double d) {
    if (std::abs(w) < kFlatSlope) return d;
    return std::expm1(w * d) / w;
}

double growth_dw(double w, double d) {
    const double x = w * d;
    if (std::abs(x) < 1e-4) {
        // series of (x e^x - expm1(x)) / w^2
        return d * d * (0.5 + x / 3.0 + x * x / 8.0);
    }
    return (x * std::exp(x) - std::expm1(x)) / (w * w);
}

void check_exponent(double e) {
    if (!(e <= kMaxExponent)) {
        if (std::isnan(e)) throw NumericalError("intensity exponent is not a number");
        throw NumericalError("intensity overflow (exponent " + std::to_string(e) + ")");
    }
}

}  // namespace

double time_exponent(const GbtppParams& p, std::span<const double> h, std::span<const double> y) {
    const auto& d = p.dims();
    return kernels::active().dot(p.v_h(), h.data(), d.hidden) +
           kernels::active().dot(p.v_y(), y.data(), d.feature_dim()) + p.b_t();
}

double log_intensity_checked(double c, double w, double d) {
    const double e = c + w * d;
    check_exponent(e);
    return e;
}

double compensator(double c, double w, double d) {
    check_exponent(c + std::max(w * d, 0.0));
    return std::exp(c) * growth(w, d);
}

double log_time_density(double c, double w, double d) {
    if (std::abs(w) < kFlatSlope) {
        check_exponent(c);
        return c - std::exp(c) * d;
    }
    return log_intensity_checked(c, w, d) - compensator(c, w, d);
}

double time_density(double c, double w, double d) { return std::exp(log_time_density(c, w, d)); }

double intensity(const GbtppParams& p, std::span<const double> h, std::span<const double> y, double t,
                 double t_prev) {
    const double c = time_exponent(p, h, y);
    return std::exp(log_intensity_checked(c, p.w_t(), t - t_prev));
}

double time_density(const GbtppParams& p, std::span<const double> h, std::span<const double> y, double t,
                    double t_prev) {
    return time_density(time_exponent(p, h, y), p.w_t(), t - t_prev);
}

TimeNll time_nll(double c, double w, double d) {
    TimeNll out;
    if (std::abs(w) < kFlatSlope) {
        check_exponent(c);
        const double ec = std::exp(c);
        out.value = -c + ec * d;
        out.d_c = -1.0 + ec * d;
        out.d_w = -d + ec * 0.5 * d * d;
        return out;
    }
    const double lam = log_intensity_checked(c, w, d);
    const double ec = std::exp(c);
    const double big = ec * growth(w, d);
    out.value = -lam + big;
    out.d_c = -1.0 + big;
    out.d_w = -d + ec * growth_dw(w, d);
    return out;
}

double survival_cutoff(double c, double w, double survival_tol) {
    const double target = -std::log(survival_tol);
    check_exponent(c);
    const double scaled = target * std::exp(-c);  // compensator must reach `target`
    if (std::abs(w) < kFlatSlope) return scaled;
    const double arg = scaled * w;
    if (arg <= -1.0) throw NumericalError("non-integrable tail: survival never falls below tolerance");
    return std::log1p(arg) / w;
}

double expected_elapsed(double c, double w, double survival_tol) {
    const double cut = survival_cutoff(c, w, survival_tol);
    QuadratureConfig q;
    q.window = cut;
    // The mean is at most the cut-off, so this is a relative tolerance.
    q.abs_tol = 1e-10 * cut;
    return integrate_1d([&](double d) { return d * time_density(c, w, d); }, 0.0, q);
}

double density_mass(double c, double w, double survival_tol) {
    QuadratureConfig q;
    q.window = survival_cutoff(c, w, survival_tol);
    return integrate_1d([&](double d) { return time_density(c, w, d); }, 0.0, q);
}

}  // namespace gbtpp
