#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "gbtpp/numerics/matrix.hpp"
#include "gbtpp/numerics/rng.hpp"

namespace gbtpp {

struct ModelDims {
    std::size_t num_nodes = 0;   // V
    std::size_t embed_dim = 0;   // d; node features are 2d long
    std::size_t hidden = 0;      // H
    std::size_t input_dim = 0;   // D_em

    [[nodiscard]] std::size_t feature_dim() const noexcept { return 2 * embed_dim; }
    friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Every trainable tensor of the recurrent model, stored back to back in one
/// buffer so optimisers and gradient checks can treat it as a flat vector.
///
///   W_em  V x D_em     input embedding rows, indexed by node
///   b_em  D_em
///   W_v   D_em x H     h += W_v^T (W_em[v] + b_em)
///   W_t   H            h += W_t * time feature
///   W_y   2d x H       h += W_y^T y_v
///   W_h   H x H        h += W_h^T h_prev
///   b_h   H
///   V_h   V x H        logit_k = V_h[k] . h + b_out[k] + bias_k
///   b_out V
///   U_h   V x H        bias scale ReLU(U_h[current] . h)
///   v_h   H            intensity exponent c = v_h . h + v_y . y + b_t
///   v_y   2d
///   w_t   1            slope of the log-intensity in elapsed time
///   b_t   1
enum class Field : std::uint8_t { W_em, b_em, W_v, W_t, W_y, W_h, b_h, V_h, b_out, U_h, v_h, v_y, w_t, b_t };
inline constexpr std::size_t kNumFields = 14;

[[nodiscard]] std::string_view field_name(Field f) noexcept;
[[nodiscard]] std::array<Field, kNumFields> all_fields() noexcept;

class GbtppParams {
public:
    GbtppParams() = default;
    /// Zero-filled.
    explicit GbtppParams(const ModelDims& dims);

    [[nodiscard]] const ModelDims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t size() const noexcept { return buffer_.size(); }

    [[nodiscard]] std::span<double> flat() noexcept { return buffer_; }
    [[nodiscard]] std::span<const double> flat() const noexcept { return buffer_; }

    [[nodiscard]] std::span<double> field(Field f) noexcept;
    [[nodiscard]] std::span<const double> field(Field f) const noexcept;
    /// (rows, cols) of a field; vectors are (n, 1), scalars (1, 1).
    [[nodiscard]] std::pair<std::size_t, std::size_t> shape(Field f) const noexcept;

    double* W_em() noexcept { return ptr(Field::W_em); }
    double* b_em() noexcept { return ptr(Field::b_em); }
    double* W_v() noexcept { return ptr(Field::W_v); }
    double* W_t() noexcept { return ptr(Field::W_t); }
    double* W_y() noexcept { return ptr(Field::W_y); }
    double* W_h() noexcept { return ptr(Field::W_h); }
    double* b_h() noexcept { return ptr(Field::b_h); }
    double* V_h() noexcept { return ptr(Field::V_h); }
    double* b_out() noexcept { return ptr(Field::b_out); }
    double* U_h() noexcept { return ptr(Field::U_h); }
    double* v_h() noexcept { return ptr(Field::v_h); }
    double* v_y() noexcept { return ptr(Field::v_y); }
    double& w_t() noexcept { return *ptr(Field::w_t); }
    double& b_t() noexcept { return *ptr(Field::b_t); }

    const double* W_em() const noexcept { return ptr(Field::W_em); }
    const double* b_em() const noexcept { return ptr(Field::b_em); }
    const double* W_v() const noexcept { return ptr(Field::W_v); }
    const double* W_t() const noexcept { return ptr(Field::W_t); }
    const double* W_y() const noexcept { return ptr(Field::W_y); }
    const double* W_h() const noexcept { return ptr(Field::W_h); }
    const double* b_h() const noexcept { return ptr(Field::b_h); }
    const double* V_h() const noexcept { return ptr(Field::V_h); }
    const double* b_out() const noexcept { return ptr(Field::b_out); }
    const double* U_h() const noexcept { return ptr(Field::U_h); }
    const double* v_h() const noexcept { return ptr(Field::v_h); }
    const double* v_y() const noexcept { return ptr(Field::v_y); }
    double w_t() const noexcept { return *ptr(Field::w_t); }
    double b_t() const noexcept { return *ptr(Field::b_t); }

    void set_zero() noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

    friend bool operator==(const GbtppParams&, const GbtppParams&) = default;

private:
    double* ptr(Field f) noexcept { return buffer_.data() + offsets_[static_cast<std::size_t>(f)]; }
    const double* ptr(Field f) const noexcept {
        return buffer_.data() + offsets_[static_cast<std::size_t>(f)];
    }

    ModelDims dims_;
    std::array<std::size_t, kNumFields + 1> offsets_{};
    Vector buffer_;
};

/// Matrices uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; b_em, b_h, b_out zero;
/// w_t = 0.1, b_t = 0. Fan-in is the length of the vector the matrix acts on.
[[nodiscard]] GbtppParams init_params(const ModelDims& dims, Rng& rng);

/// Which structural pieces of the model are live.
///   gbtpp: everything
///   nrpp:  no graph bias (U_h held at zero)
///   rmtpp: no graph bias and no node-embedding inputs (W_y, v_y, U_h held at zero)
enum class ModelKind : std::uint8_t { gbtpp, nrpp, rmtpp };

[[nodiscard]] std::string_view model_kind_name(ModelKind k) noexcept;
/// Throws ValidationError for unknown names.
[[nodiscard]] ModelKind parse_model_kind(std::string_view name);

/// True when `f` is structurally removed under `kind`.
[[nodiscard]] bool field_masked(ModelKind kind, Field f) noexcept;
/// Zeroes every masked field.
void apply_mask(ModelKind kind, GbtppParams& p) noexcept;

}  // namespace gbtpp
