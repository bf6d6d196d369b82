#include "gbtpp/model/params.hpp"

#include <algorithm>
#include <cmath>

#include "gbtpp/error.hpp"

namespace gbtpp {
namespace {

constexpr std::array<std::string_view, kNumFields> kNames{
    "W_em", "b_em", "W_v", "W_t", "W_y", "W_h", "b_h", "V_h", "b_out", "U_h", "v_h", "v_y", "w_t", "b_t"};

std::pair<std::size_t, std::size_t> shape_of(const ModelDims& d, Field f) noexcept {
    const std::size_t V = d.num_nodes, H = d.hidden, D = d.input_dim, Y = d.feature_dim();
    switch (f) {
        case Field::W_em: return {V, D};
        case Field::b_em: return {D, 1};
        case Field::W_v: return {D, H};
        case Field::W_t: return {H, 1};
        case Field::W_y: return {Y, H};
        case Field::W_h: return {H, H};
        case Field::b_h: return {H, 1};
        case Field::V_h: return {V, H};
        case Field::b_out: return {V, 1};
        case Field::U_h: return {V, H};
        case Field::v_h: return {H, 1};
        case Field::v_y: return {Y, 1};
        case Field::w_t: return {1, 1};
        case Field::b_t: return {1, 1};
    }
    return {0, 0};
}

}  // namespace

std::string_view field_name(Field f) noexcept { return kNames[static_cast<std::size_t>(f)]; }

std::array<Field, kNumFields> all_fields() noexcept {
    std::array<Field, kNumFields> out{};
    for (std::size_t i = 0; i < kNumFields; ++i) out[i] = static_cast<Field>(i);
    return out;
}

GbtppParams::GbtppParams(const ModelDims& dims) : dims_(dims) {
    std::size_t off = 0;
    for (Field f : all_fields()) {
        offsets_[static_cast<std::size_t>(f)] = off;
        const auto [r, c] = shape_of(dims, f);
        off += r * c;
    }
    offsets_[kNumFields] = off;
    buffer_.assign(off, 0.0);
}

std::span<double> GbtppParams::field(Field f) noexcept {
    const auto i = static_cast<std::size_t>(f);
    return {buffer_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::span<const double> GbtppParams::field(Field f) const noexcept {
    const auto i = static_cast<std::size_t>(f);
    return {buffer_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::pair<std::size_t, std::size_t> GbtppParams::shape(Field f) const noexcept { return shape_of(dims_, f); }

void GbtppParams::set_zero() noexcept { std::fill(buffer_.begin(), buffer_.end(), 0.0); }

bool GbtppParams::all_finite() const noexcept {
    for (double x : buffer_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

GbtppParams init_params(const ModelDims& dims, Rng& rng) {
    if (dims.num_nodes == 0 || dims.embed_dim == 0 || dims.hidden == 0 || dims.input_dim == 0) {
        throw ValidationError("init_params: all dimensions must be positive");
    }
    GbtppParams p(dims);
    const auto fill = [&](Field f, std::size_t fan_in) {
        const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& x : p.field(f)) x = rng.uniform(-r, r);
    };
    // W_em is indexed by a one-hot node vector: fan-in 1.
    fill(Field::W_em, 1);
    fill(Field::W_v, dims.input_dim);
    fill(Field::W_t, 1);
    fill(Field::W_y, dims.feature_dim());
    fill(Field::W_h, dims.hidden);
    fill(Field::V_h, dims.hidden);
    fill(Field::U_h, dims.hidden);
    fill(Field::v_h, dims.hidden);
    fill(Field::v_y, dims.feature_dim());
    p.w_t() = 0.1;
    p.b_t() = 0.0;
    return p;
}

std::string_view model_kind_name(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::gbtpp: return "gbtpp";
        case ModelKind::nrpp: return "nrpp";
        case ModelKind::rmtpp: return "rmtpp";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "gbtpp") return ModelKind::gbtpp;
    if (name == "nrpp") return ModelKind::nrpp;
    if (name == "rmtpp") return ModelKind::rmtpp;
    throw ValidationError("unknown recurrent model kind '" + std::string(name) + "'");
}

bool field_masked(ModelKind kind, Field f) noexcept {
    switch (kind) {
        case ModelKind::gbtpp: return false;
        case ModelKind::nrpp: return f == Field::U_h;
        case ModelKind::rmtpp: return f == Field::U_h || f == Field::W_y || f == Field::v_y;
    }
    return false;
}

void apply_mask(ModelKind kind, GbtppParams& p) noexcept {
    for (Field f : all_fields()) {
        if (field_masked(kind, f)) {
            for (double& x : p.field(f)) x = 0.0;
        }
    }
}

}  // namespace gbtpp
