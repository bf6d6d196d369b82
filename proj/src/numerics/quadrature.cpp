#include "gbtpp/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "gbtpp/error.hpp"

namespace gbtpp {
namespace {

struct Panel {
    double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const Integrand& f, const Panel& p, double tol, int depth) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || m <= p.a || m >= p.b) {
        return left + right + delta / 15.0;
    }
    return recurse(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
           recurse(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

double checked(const Integrand& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericalError("integrand is not finite at t=" + std::to_string(x));
    return v;
}

}  // namespace

double adaptive_simpson(const Integrand& f, double a, double b, double abs_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    const Integrand g = [&f](double x) { return checked(f, x); };
    const double fa = g(a);
    const double fb = g(b);
    const double fm = g(0.5 * (a + b));
    const Panel p{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)};
    return recurse(g, p, abs_tol, max_depth);
}

double integrate_1d(const Integrand& f, double a, const QuadratureConfig& cfg) {
    double window = 0.0;
    if (cfg.window) {
        window = *cfg.window;
        if (!(window > 0.0) || !std::isfinite(window)) {
            throw NumericalError("non-integrable tail: invalid integration window");
        }
    } else {
        window = cfg.initial_window;
        const auto tail_small = [&](double t) {
            return std::abs(checked(f, a + t)) <= cfg.tail_tol &&
                   std::abs(checked(f, a + 0.75 * t)) <= cfg.tail_tol;
        };
        while (!tail_small(window)) {
            window *= 2.0;
            if (window > cfg.max_window) throw NumericalError("non-integrable tail");
        }
    }
    const std::size_t panels = std::max<std::size_t>(1, cfg.panels);
    const double width = window / static_cast<double>(panels);
    const double tol = cfg.abs_tol / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == panels) ? a + window : lo + width;
        total += adaptive_simpson(f, lo, hi, tol, cfg.max_depth);
    }
    return total;
}

}  // namespace gbtpp
