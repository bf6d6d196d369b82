#pragma once

// Dense inner-loop kernels used by every model in the library.
//
// Each kernel has a scalar reference implementation and, on x86-64 builds, an
// AVX2/FMA variant. The variant is picked once at first use from the CPU
// feature bits; GBTPP_ISA=scalar in the environment (or set_isa) forces the
// reference path. Both paths agree to rounding (see tests/unit/test_kernels).

#include <cstddef>
#include <span>
#include <string_view>

namespace gbtpp::kernels {

enum class Isa { scalar, avx2 };

[[nodiscard]] Isa active_isa() noexcept;
[[nodiscard]] bool isa_available(Isa isa) noexcept;
/// Returns false (and leaves the selection untouched) if `isa` is unavailable.
bool set_isa(Isa isa) noexcept;
[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

/// Function table for one instruction-set variant.
struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = M x, M row-major rows x cols
    void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
    // y += M^T x, x has `rows` entries, y has `cols`
    void (*gemv_t_acc)(const double* m, std::size_t rows, std::size_t cols, const double* x,
                       double* y);
    // M += alpha * x y^T
    void (*ger)(double* m, std::size_t rows, std::size_t cols, double alpha, const double* x,
                const double* y);
    // sum of squares
    double (*sumsq)(const double* a, std::size_t n);
};

[[nodiscard]] const KernelTable& table(Isa isa) noexcept;
[[nodiscard]] const KernelTable& active() noexcept;

namespace scalar {
const KernelTable& table() noexcept;
}
#if defined(GBTPP_HAVE_AVX2)
namespace avx2 {
const KernelTable& table() noexcept;
}
#endif

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x,
                 double* y) noexcept {
    active().gemv(m, rows, cols, x, y);
}
inline void gemv_t_acc(const double* m, std::size_t rows, std::size_t cols, const double* x,
                       double* y) noexcept {
    active().gemv_t_acc(m, rows, cols, x, y);
}
inline void ger(double* m, std::size_t rows, std::size_t cols, double alpha, const double* x,
                const double* y) noexcept {
    active().ger(m, rows, cols, alpha, x, y);
}
inline double sumsq(std::span<const double> a) noexcept { return active().sumsq(a.data(), a.size()); }

}  // namespace gbtpp::kernels
