#include "gbtpp/numerics/finite_diff.hpp"

#include <algorithm>
#include <cmath>

#include "gbtpp/error.hpp"

namespace gbtpp {

Vector finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                        std::span<const double> x, double eps) {
    Vector probe(x.begin(), x.end());
    Vector grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + eps;
        const double up = f(probe);
        probe[i] = x[i] - eps;
        const double down = f(probe);
        probe[i] = x[i];
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw NumericalError("finite_diff_grad: non-finite function value at coordinate " +
                                 std::to_string(i));
        }
        grad[i] = (up - down) / (2.0 * eps);
    }
    return grad;
}

double relative_error(double a, double b) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace gbtpp
