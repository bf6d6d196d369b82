#pragma once

#include <span>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/embed/embeddings.hpp"
#include "gbtpp/model/params.hpp"

namespace gbtpp {

enum class TimeFeature { raw_gap, log_gap };

[[nodiscard]] std::string_view time_feature_name(TimeFeature f) noexcept;
[[nodiscard]] TimeFeature parse_time_feature(std::string_view name);

/// Trained parameters plus everything needed to evaluate them.
struct GbtppModel {
    ModelKind kind = ModelKind::gbtpp;
    GbtppParams params;
    TimeFeature time_feature = TimeFeature::raw_gap;
    /// Model time = data time / time_scale. The density is mapped back to data
    /// units (log f_data = log f_model - log time_scale).
    double time_scale = 1.0;
    /// Weight of the time term in the joint log-likelihood.
    double time_weight = 1.0;
};

/// Feature for events[index]: the gap to the previous event (0 for the first
/// event), divided by `scale`, and passed through log1p under log_gap.
/// Throws ValidationError on a negative gap.
[[nodiscard]] double time_feature(std::span<const Event> events, std::size_t index, TimeFeature kind,
                                  double scale = 1.0);

/// One recurrence step: h = ReLU(W_v^T (W_em[node] + b_em) + W_y^T y + W_t tfeat
///                               + W_h^T h_prev + b_h).
/// Throws NumericalError "state blow-up" on a non-finite result.
[[nodiscard]] Vector step_history(const GbtppParams& p, std::span<const double> h_prev, NodeId node,
                                  double tfeat, std::span<const double> y);

/// Same, writing the pre-activation and the state into caller buffers.
/// `x_em` receives W_em[node] + b_em. Any of the buffers may alias nothing else.
void step_history_into(const GbtppParams& p, std::span<const double> h_prev, NodeId node, double tfeat,
                       std::span<const double> y, std::span<double> x_em, std::span<double> pre,
                       std::span<double> h);

/// p(current, k) = sigmoid(source_current . target_k) for every k.
[[nodiscard]] Vector proximity_row(const NodeEmbeddings& emb, NodeId current);

/// bias_k = ReLU(U_h[current] . h) * p(current, k)
[[nodiscard]] Vector graph_bias(const GbtppParams& p, std::span<const double> h, const NodeEmbeddings& emb,
                                NodeId current);

/// V_h h + b_out + graph_bias
[[nodiscard]] Vector node_logits(const GbtppParams& p, std::span<const double> h, const NodeEmbeddings& emb,
                                 NodeId current);

/// softmax of node_logits
[[nodiscard]] Vector node_distribution(const GbtppParams& p, std::span<const double> h,
                                       const NodeEmbeddings& emb, NodeId current);

/// State after consuming `history` from h_0 = 0.
[[nodiscard]] Vector history_state(const GbtppModel& m, const NodeEmbeddings& emb,
                                   std::span<const Event> history);

/// Throws ValidationError if the model and embeddings disagree on V or d.
void check_compatible(const GbtppModel& m, const NodeEmbeddings& emb);

struct SampleLogLikelihood {
    double node = 0.0;
    double time = 0.0;
};

/// Per-sample terms log P(next node) and log f(next time), in data time units,
/// for the N-1 samples of a cascade.
[[nodiscard]] std::vector<SampleLogLikelihood> sample_log_likelihoods(const GbtppModel& m,
                                                                      const NodeEmbeddings& emb,
                                                                      const Cascade& c);

/// Sum over samples of node + time_weight * time.
[[nodiscard]] double sequence_log_likelihood(const GbtppModel& m, const NodeEmbeddings& emb, const Cascade& c);

struct NodeTimePrediction {
    NodeId node = 0;
    double time = 0.0;
    Vector probabilities;
};

/// `prefix` is the history followed by the current event (at least one event).
/// Node: argmax of the distribution (lowest id on ties). Time: t_current plus
/// the expected elapsed time under the density, by quadrature.
[[nodiscard]] NodeTimePrediction predict_next(const GbtppModel& m, const NodeEmbeddings& emb,
                                              std::span<const Event> prefix);

}  // namespace gbtpp
