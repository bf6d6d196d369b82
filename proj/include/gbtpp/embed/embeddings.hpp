#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "gbtpp/core/adjacency.hpp"
#include "gbtpp/numerics/matrix.hpp"
#include "gbtpp/numerics/rng.hpp"

namespace gbtpp {

/// Per-node source (y^s) and target (y^e) vectors of dimension d.
struct NodeEmbeddings {
    std::size_t num_nodes = 0;
    std::size_t dim = 0;
    DenseMatrix source;
    DenseMatrix target;

    NodeEmbeddings() = default;
    NodeEmbeddings(std::size_t v, std::size_t d) : num_nodes(v), dim(d), source(v, d), target(v, d) {}

    /// Zero embeddings (every proximity is 0.5).
    [[nodiscard]] static NodeEmbeddings zeros(std::size_t v, std::size_t d) { return {v, d}; }

    /// Model-side feature vector [source_i || target_i], length 2d.
    [[nodiscard]] Vector feature(NodeId i) const;
    void feature_into(NodeId i, std::span<double> out) const;

    friend bool operator==(const NodeEmbeddings&, const NodeEmbeddings&) = default;
};

struct EmbedConfig {
    std::size_t dim = 32;
    double learning_rate = 0.05;
    std::size_t epochs = 200;
    double l2 = 1e-4;
    std::size_t neg_samples = 5;
    std::uint64_t seed = 0;
    /// Edge set E = {(i,j) : N_ij >= min_edge_count}; 1 gives E = {A_ij > 0}.
    std::uint64_t min_edge_count = 1;
    /// Above this many edges, training switches from full-batch to per-edge steps.
    std::size_t sgd_edge_threshold = 100'000;
};

/// sigmoid(source_i . target_j); directed.
[[nodiscard]] double first_order_proximity(const NodeEmbeddings& emb, NodeId i, NodeId j);

/// A_ij / sum of all edge weights. Throws ValidationError on zero total weight.
[[nodiscard]] double empirical_edge_probability(const AdjacencyEstimate& adj, NodeId i, NodeId j);

struct WeightedPair {
    NodeId i = 0;
    NodeId j = 0;
    double weight = 0.0;
};

/// Positive edges {(i, j, A_ij)} with N_ij >= min_count.
[[nodiscard]] std::vector<WeightedPair> edge_list(const AdjacencyEstimate& adj, std::uint64_t min_count = 1);

/// For each positive edge (i, j) draw `per_edge` targets k with (i, k) not an
/// edge, uniformly; each negative inherits the weight A_ij of its edge.
[[nodiscard]] std::vector<WeightedPair> sample_negatives(const AdjacencyEstimate& adj,
                                                         std::span<const WeightedPair> edges,
                                                         std::size_t per_edge, Rng& rng);

struct EmbedGradient {
    DenseMatrix source;
    DenseMatrix target;
};

/// -sum_E A_ij log p(i,j) - sum_neg w log(1 - p(i,k)) + l2 (|S|^2 + |T|^2).
/// Log arguments are clamped at 1e-12. Fills `grad` when non-null.
[[nodiscard]] double embed_loss(const NodeEmbeddings& emb, std::span<const WeightedPair> edges,
                                std::span<const WeightedPair> negatives, double l2,
                                EmbedGradient* grad = nullptr);

/// Convenience overload: edges from `adj`, no negatives.
[[nodiscard]] double embed_loss(const NodeEmbeddings& emb, const AdjacencyEstimate& adj, double l2);

struct EmbedTrainingResult {
    NodeEmbeddings embeddings;
    /// Loss at initialisation followed by the loss after every epoch.
    std::vector<double> loss_trace;
    std::size_t best_epoch = 0;
};

[[nodiscard]] NodeEmbeddings init_embeddings(std::size_t v, std::size_t d, Rng& rng);

/// Throws NumericalError "divergence; lower learning_rate" on a non-finite loss.
[[nodiscard]] EmbedTrainingResult train_embeddings(const AdjacencyEstimate& adj, const EmbedConfig& cfg);
[[nodiscard]] EmbedTrainingResult train_embeddings(const AdjacencyEstimate& adj, const EmbedConfig& cfg,
                                                   Rng& rng);

/// CSV node,role,c0..c{d-1}; role is s (source) or e (target).
void write_embeddings_csv(const NodeEmbeddings& emb, std::ostream& out);
[[nodiscard]] NodeEmbeddings read_embeddings_csv(std::istream& in);
void save_embeddings(const NodeEmbeddings& emb, const std::filesystem::path& path);
[[nodiscard]] NodeEmbeddings load_embeddings(const std::filesystem::path& path);

}  // namespace gbtpp
