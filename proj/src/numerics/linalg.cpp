#include "gbtpp/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gbtpp {
namespace {

double norm2(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double spectral_radius(const DenseMatrix& a, const PowerIterationConfig& cfg) {
    if (!a.square()) throw ValidationError("spectral_radius needs a square matrix");
    if (!a.all_finite()) throw ValidationError("spectral_radius: non-finite entry");
    const std::size_t n = a.rows();
    if (n == 0) return 0.0;

    // Iterate on A + sI: same dominant eigenvector, and the shift breaks the
    // period-2 oscillation of pure power iteration on (near-)periodic
    // nonnegative matrices. The shift is a tenth of the row-sum bound on the
    // radius, so it barely narrows the eigenvalue gap.
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (double v : a.row(i)) row += std::abs(v);
        bound = std::max(bound, row);
    }
    if (bound == 0.0) return 0.0;
    const double shift = 0.1 * bound;

    Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Vector y(n);
    double estimate = 0.0;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        y = a.multiply(x);
        for (std::size_t i = 0; i < n; ++i) y[i] += shift * x[i];
        const double ny = norm2(y);
        if (ny == 0.0) return 0.0;
        double next = 0.0;
        for (std::size_t i = 0; i < n; ++i) next += x[i] * y[i];
        for (std::size_t i = 0; i < n; ++i) y[i] /= ny;
        x.swap(y);
        const double change = std::abs(next - estimate);
        estimate = next;
        if (it > 0 && change <= cfg.tolerance * std::abs(next)) return std::max(0.0, estimate - shift);
    }
    throw ConvergenceError("spectral_radius: power iteration did not converge",
                           std::max(0.0, estimate - shift));
}

Vector solve_linear(DenseMatrix a, Vector b) {
    if (!a.square() || a.rows() != b.size()) throw ValidationError("solve_linear: size mismatch");
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    const double tiny = 1e-14 * std::max(scale, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        }
        if (std::abs(a(piv, k)) <= tiny) throw NumericalError("solve_linear: singular system");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

}  // namespace gbtpp
