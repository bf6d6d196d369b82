#include "gbtpp/embed/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include "gbtpp/error.hpp"
#include "gbtpp/numerics/activations.hpp"
#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp {
namespace {

constexpr double kLogClamp = 1e-12;

}  // namespace

Vector NodeEmbeddings::feature(NodeId i) const {
    Vector y(2 * dim);
    feature_into(i, y);
    return y;
}

void NodeEmbeddings::feature_into(NodeId i, std::span<double> out) const {
    const auto s = source.row(i);
    const auto t = target.row(i);
    std::copy(s.begin(), s.end(), out.begin());
    std::copy(t.begin(), t.end(), out.begin() + static_cast<std::ptrdiff_t>(dim));
}

double first_order_proximity(const NodeEmbeddings& emb, NodeId i, NodeId j) {
    if (i >= emb.num_nodes || j >= emb.num_nodes) throw ValidationError("proximity: node out of range");
    return sigmoid(kernels::dot(emb.source.row(i), emb.target.row(j)));
}

double empirical_edge_probability(const AdjacencyEstimate& adj, NodeId i, NodeId j) {
    const double total = adj.total_weight();
    if (!(total > 0.0)) throw ValidationError("empirical_edge_probability: zero total edge weight");
    return adj.weight(i, j) / total;
}

std::vector<WeightedPair> edge_list(const AdjacencyEstimate& adj, std::uint64_t min_count) {
    std::vector<WeightedPair> edges;
    const std::uint64_t threshold = std::max<std::uint64_t>(min_count, 1);
    for (std::size_t i = 0; i < adj.num_nodes; ++i) {
        for (std::size_t j = 0; j < adj.num_nodes; ++j) {
            if (adj.count(i, j) >= threshold) {
                edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), adj.weight(i, j)});
            }
        }
    }
    return edges;
}

std::vector<WeightedPair> sample_negatives(const AdjacencyEstimate& adj, std::span<const WeightedPair> edges,
                                           std::size_t per_edge, Rng& rng) {
    std::vector<WeightedPair> out;
    if (per_edge == 0) return out;
    const std::size_t v = adj.num_nodes;
    std::vector<std::vector<NodeId>> non_edges(v);
    std::vector<bool> built(v, false);
    out.reserve(edges.size() * per_edge);
    for (const auto& e : edges) {
        if (!built[e.i]) {
            for (std::size_t k = 0; k < v; ++k) {
                if (adj.count(e.i, k) == 0) non_edges[e.i].push_back(static_cast<NodeId>(k));
            }
            built[e.i] = true;
        }
        const auto& pool = non_edges[e.i];
        if (pool.empty()) continue;
        for (std::size_t m = 0; m < per_edge; ++m) {
            out.push_back({e.i, pool[static_cast<std::size_t>(rng.below(pool.size()))], e.weight});
        }
    }
    return out;
}

double embed_loss(const NodeEmbeddings& emb, std::span<const WeightedPair> edges,
                  std::span<const WeightedPair> negatives, double l2, EmbedGradient* grad) {
    if (emb.source.rows() != emb.num_nodes || emb.target.rows() != emb.num_nodes ||
        emb.source.cols() != emb.dim || emb.target.cols() != emb.dim) {
        throw ValidationError("embed_loss: embedding dimensions are inconsistent");
    }
    if (grad) {
        grad->source = DenseMatrix(emb.num_nodes, emb.dim);
        grad->target = DenseMatrix(emb.num_nodes, emb.dim);
    }
    double loss = 0.0;
    for (const auto& e : edges) {
        const double x = kernels::dot(emb.source.row(e.i), emb.target.row(e.j));
        const double p = sigmoid(x);
        if (p < kLogClamp) {
            loss -= e.weight * std::log(kLogClamp);
            continue;
        }
        loss -= e.weight * log_sigmoid(x);
        if (grad) {
            const double g = e.weight * (p - 1.0);
            kernels::axpy(g, emb.target.row(e.j), grad->source.row(e.i));
            kernels::axpy(g, emb.source.row(e.i), grad->target.row(e.j));
        }
    }
    for (const auto& n : negatives) {
        const double x = kernels::dot(emb.source.row(n.i), emb.target.row(n.j));
        const double q = sigmoid(-x);  // 1 - p
        if (q < kLogClamp) {
            loss -= n.weight * std::log(kLogClamp);
            continue;
        }
        loss -= n.weight * log_sigmoid(-x);
        if (grad) {
            const double g = n.weight * (1.0 - q);
            kernels::axpy(g, emb.target.row(n.j), grad->source.row(n.i));
            kernels::axpy(g, emb.source.row(n.i), grad->target.row(n.j));
        }
    }
    if (l2 > 0.0) {
        loss += l2 * (kernels::sumsq(emb.source.data()) + kernels::sumsq(emb.target.data()));
        if (grad) {
            kernels::axpy(2.0 * l2, emb.source.data(), grad->source.data());
            kernels::axpy(2.0 * l2, emb.target.data(), grad->target.data());
        }
    }
    return loss;
}

double embed_loss(const NodeEmbeddings& emb, const AdjacencyEstimate& adj, double l2) {
    const auto edges = edge_list(adj);
    return embed_loss(emb, edges, {}, l2);
}

}  // namespace gbtpp
