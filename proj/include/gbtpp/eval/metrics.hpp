#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

/// One held-out prediction. Node-only models leave pred_time empty, time-only
/// models leave pred_node empty.
struct PredictionRecord {
    std::string sample_id;
    std::string model;
    std::size_t fold = 0;
    NodeId true_node = 0;
    std::optional<NodeId> pred_node;
    double true_time = 0.0;
    std::optional<double> pred_time;
    /// Position of the true node when nodes are sorted by decreasing
    /// probability (ties by lowest id); 0 means the top prediction.
    std::optional<std::size_t> true_rank;
    /// Full distribution; kept in memory only.
    std::optional<Vector> probabilities;
};

/// Rank of `true_node` in `probs` (ties broken by lowest id).
[[nodiscard]] std::size_t rank_of(std::span<const double> probs, NodeId true_node);

/// Sets true_rank from probabilities (and checks they sum to 1 within 1e-6).
void attach_distribution(PredictionRecord& r, Vector probs);

/// Fraction of node predictions that hit; records without pred_node are
/// skipped. Throws ValidationError if none remain.
[[nodiscard]] double node_accuracy(std::span<const PredictionRecord> records);

/// sqrt(mean((pred_time - true_time)^2)) over records with pred_time.
[[nodiscard]] double time_rmse(std::span<const PredictionRecord> records);

/// Fraction of records whose true node is among the K most probable. Every
/// record must carry a distribution (or its true_rank).
[[nodiscard]] double topk_precision(std::span<const PredictionRecord> records, std::size_t k);

}  // namespace gbtpp
