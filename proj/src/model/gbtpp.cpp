#include "gbtpp/model/gbtpp.hpp"

#include <cmath>
#include <string>

#include "gbtpp/error.hpp"
#include "gbtpp/model/time_density.hpp"
#include "gbtpp/numerics/activations.hpp"
#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp {

std::string_view time_feature_name(TimeFeature f) noexcept {
    return f == TimeFeature::raw_gap ? "raw_gap" : "log_gap";
}

TimeFeature parse_time_feature(std::string_view name) {
    if (name == "raw_gap") return TimeFeature::raw_gap;
    if (name == "log_gap") return TimeFeature::log_gap;
    throw ValidationError("unknown time feature '" + std::string(name) + "' (raw_gap|log_gap)");
}

double time_feature(std::span<const Event> events, std::size_t index, TimeFeature kind, double scale) {
    if (index == 0) return 0.0;
    const double gap = (events[index].time - events[index - 1].time) / scale;
    if (!(gap >= 0.0)) throw ValidationError("negative inter-event gap at position " + std::to_string(index));
    return kind == TimeFeature::log_gap ? std::log1p(gap) : gap;
}

void step_history_into(const GbtppParams& p, std::span<const double> h_prev, NodeId node, double tfeat,
                       std::span<const double> y, std::span<double> x_em, std::span<double> pre,
                       std::span<double> h) {
    const auto& d = p.dims();
    const auto& k = kernels::active();
    if (node >= d.num_nodes) throw ValidationError("node " + std::to_string(node) + " out of range");
    const std::size_t H = d.hidden, D = d.input_dim;

    const double* em = p.W_em() + static_cast<std::size_t>(node) * D;
    for (std::size_t i = 0; i < D; ++i) x_em[i] = em[i] + p.b_em()[i];

    for (std::size_t i = 0; i < H; ++i) pre[i] = p.b_h()[i] + p.W_t()[i] * tfeat;
    k.gemv_t_acc(p.W_v(), D, H, x_em.data(), pre.data());
    k.gemv_t_acc(p.W_y(), d.feature_dim(), H, y.data(), pre.data());
    k.gemv_t_acc(p.W_h(), H, H, h_prev.data(), pre.data());
    for (std::size_t i = 0; i < H; ++i) {
        if (!std::isfinite(pre[i])) throw NumericalError("state blow-up");
        h[i] = relu(pre[i]);
    }
}

Vector step_history(const GbtppParams& p, std::span<const double> h_prev, NodeId node, double tfeat,
                    std::span<const double> y) {
    const auto& d = p.dims();
    Vector x_em(d.input_dim), pre(d.hidden), h(d.hidden);
    step_history_into(p, h_prev, node, tfeat, y, x_em, pre, h);
    return h;
}

Vector proximity_row(const NodeEmbeddings& emb, NodeId current) {
    Vector out = emb.target.multiply(emb.source.row(current));
    for (double& x : out) x = sigmoid(x);
    return out;
}

Vector graph_bias(const GbtppParams& p, std::span<const double> h, const NodeEmbeddings& emb, NodeId current) {
    const auto& d = p.dims();
    const double scale =
        relu(kernels::active().dot(p.U_h() + static_cast<std::size_t>(current) * d.hidden, h.data(), d.hidden));
    if (scale == 0.0) return Vector(d.num_nodes, 0.0);
    Vector out = proximity_row(emb, current);
    for (double& x : out) x *= scale;
    return out;
}

Vector node_logits(const GbtppParams& p, std::span<const double> h, const NodeEmbeddings& emb, NodeId current) {
    const auto& d = p.dims();
    if (current >= d.num_nodes) throw ValidationError("node " + std::to_string(current) + " out of range");
    Vector z(d.num_nodes);
    kernels::gemv(p.V_h(), d.num_nodes, d.hidden, h.data(), z.data());
    const Vector bias = graph_bias(p, h, emb, current);
    for (std::size_t k = 0; k < d.num_nodes; ++k) z[k] += p.b_out()[k] + bias[k];
    return z;
}

Vector node_distribution(const GbtppParams& p, std::span<const double> h, const NodeEmbeddings& emb,
                         NodeId current) {
    Vector z = node_logits(p, h, emb, current);
    softmax_inplace(z);
    return z;
}

void check_compatible(const GbtppModel& m, const NodeEmbeddings& emb) {
    const auto& d = m.params.dims();
    if (emb.num_nodes != d.num_nodes) {
        throw ValidationError("embeddings cover " + std::to_string(emb.num_nodes) + " nodes but the model has V=" +
                              std::to_string(d.num_nodes));
    }
    if (emb.dim != d.embed_dim) {
        throw ValidationError("embedding dimension " + std::to_string(emb.dim) + " does not match the model's d=" +
                              std::to_string(d.embed_dim));
    }
}

Vector history_state(const GbtppModel& m, const NodeEmbeddings& emb, std::span<const Event> history) {
    const auto& d = m.params.dims();
    Vector h(d.hidden, 0.0), next(d.hidden), x_em(d.input_dim), pre(d.hidden), y(d.feature_dim());
    for (std::size_t i = 0; i < history.size(); ++i) {
        emb.feature_into(history[i].node, y);
        const double tf = time_feature(history, i, m.time_feature, m.time_scale);
        step_history_into(m.params, h, history[i].node, tf, y, x_em, pre, next);
        h.swap(next);
    }
    return h;
}

std::vector<SampleLogLikelihood> sample_log_likelihoods(const GbtppModel& m, const NodeEmbeddings& emb,
                                                        const Cascade& c) {
    check_compatible(m, emb);
    const auto& p = m.params;
    const auto& d = p.dims();
    const std::span<const Event> ev(c.events);
    if (ev.size() < 2) throw ValidationError("cascade '" + c.seq_id + "' has fewer than 2 events");

    const double log_scale = std::log(m.time_scale);
    std::vector<SampleLogLikelihood> out;
    out.reserve(ev.size() - 1);
    Vector h(d.hidden, 0.0), next(d.hidden), x_em(d.input_dim), pre(d.hidden), y(d.feature_dim());
    for (std::size_t j = 0; j + 1 < ev.size(); ++j) {
        if (j > 0) {
            // absorb event j-1 into the history state
            emb.feature_into(ev[j - 1].node, y);
            const double tf = time_feature(ev, j - 1, m.time_feature, m.time_scale);
            step_history_into(p, h, ev[j - 1].node, tf, y, x_em, pre, next);
            h.swap(next);
        }
        const NodeId cur = ev[j].node;
        const Vector z = node_logits(p, h, emb, cur);
        SampleLogLikelihood s;
        s.node = z[ev[j + 1].node] - log_sum_exp(z);
        emb.feature_into(cur, y);
        const double cexp = time_exponent(p, h, y);
        const double delta = (ev[j + 1].time - ev[j].time) / m.time_scale;
        s.time = log_time_density(cexp, p.w_t(), delta) - log_scale;
        out.push_back(s);
    }
    return out;
}

double sequence_log_likelihood(const GbtppModel& m, const NodeEmbeddings& emb, const Cascade& c) {
    double total = 0.0;
    for (const auto& s : sample_log_likelihoods(m, emb, c)) total += s.node + m.time_weight * s.time;
    return total;
}

NodeTimePrediction predict_next(const GbtppModel& m, const NodeEmbeddings& emb, std::span<const Event> prefix) {
    check_compatible(m, emb);
    if (prefix.empty()) throw ValidationError("predict_next needs at least the current event");
    const auto& cur = prefix.back();
    const Vector h = history_state(m, emb, prefix.first(prefix.size() - 1));
    NodeTimePrediction out;
    out.probabilities = node_distribution(m.params, h, emb, cur.node);
    out.node = static_cast<NodeId>(argmax(out.probabilities));
    const Vector y = emb.feature(cur.node);
    const double cexp = time_exponent(m.params, h, y);
    out.time = cur.time + m.time_scale * expected_elapsed(cexp, m.params.w_t());
    return out;
}

}  // namespace gbtpp
