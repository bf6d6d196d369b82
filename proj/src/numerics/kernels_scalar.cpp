#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp::kernels::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(m + r * cols, x, cols);
}

void gemv_t_acc(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        if (x[r] != 0.0) axpy(x[r], m + r * cols, y, cols);
    }
}

void ger(double* m, std::size_t rows, std::size_t cols, double alpha, const double* x,
         const double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double s = alpha * x[r];
        if (s != 0.0) axpy(s, y, m + r * cols, cols);
    }
}

double sumsq(const double* a, std::size_t n) { return dot(a, a, n); }

constexpr KernelTable kTable{dot, axpy, gemv, gemv_t_acc, ger, sumsq};

}  // namespace

const KernelTable& table() noexcept { return kTable; }

}  // namespace gbtpp::kernels::scalar
