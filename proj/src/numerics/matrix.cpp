#include "gbtpp/numerics/matrix.hpp"

#include <cmath>

#include "gbtpp/error.hpp"
#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ValidationError("matrix data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const noexcept {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw ValidationError("matrix-vector size mismatch");
    Vector y(rows_);
    kernels::gemv(data_.data(), rows_, cols_, x.data(), y.data());
    return y;
}

}  // namespace gbtpp
