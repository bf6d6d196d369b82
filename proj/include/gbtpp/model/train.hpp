#pragma once

#include <cstdint>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/embed/embeddings.hpp"
#include "gbtpp/model/gbtpp.hpp"
#include "gbtpp/numerics/rng.hpp"

namespace gbtpp {

struct TrainConfig {
    ModelKind kind = ModelKind::gbtpp;
    std::size_t hidden = 64;     // H
    std::size_t input_dim = 32;  // D_em
    std::size_t bptt_len = 20;
    double learning_rate = 0.01;
    std::size_t epochs = 10;
    double grad_clip = 5.0;
    TimeFeature time_feature = TimeFeature::raw_gap;
    std::uint64_t seed = 0;
    double time_weight = 1.0;
    /// Data time units per model time unit; 0 picks the mean training gap.
    double time_scale = 0.0;
    /// w_t is projected onto [min_w_t, inf) after every step. With w_t >= 0
    /// the density integrates to one and has a finite mean.
    double min_w_t = 0.0;
};

struct TrainResult {
    GbtppModel model;
    /// Mean negative log-likelihood per sample: at initialisation, then after
    /// every epoch.
    std::vector<double> loss_trace;
    std::size_t best_epoch = 0;
};

/// Mean gap between consecutive events over all cascades.
[[nodiscard]] double mean_gap(const CascadeDataset& ds);

/// Mean per-sample negative log-likelihood (full histories).
[[nodiscard]] double mean_nll(const GbtppModel& m, const NodeEmbeddings& emb, const CascadeDataset& ds);

/// Fresh model with initialised, masked parameters and resolved time scale.
[[nodiscard]] GbtppModel init_model(const CascadeDataset& ds, const NodeEmbeddings& emb, const TrainConfig& cfg,
                                    Rng& rng);

/// SGD over truncated-BPTT windows with global-norm clipping. Cascades are
/// visited in a fresh random order every epoch; the state is carried across
/// the windows of a cascade. Returns the parameters with the lowest recorded
/// training loss. Throws NumericalError naming the epoch on divergence.
[[nodiscard]] TrainResult train(const CascadeDataset& ds, const NodeEmbeddings& emb, const TrainConfig& cfg);
[[nodiscard]] TrainResult train(const CascadeDataset& ds, const NodeEmbeddings& emb, const TrainConfig& cfg,
                                Rng& rng);

}  // namespace gbtpp
