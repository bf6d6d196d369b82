#include <cmath>

#include "gbtpp/embed/embeddings.hpp"
#include "gbtpp/error.hpp"
#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp {
namespace {

void sgd_step(NodeEmbeddings& emb, const WeightedPair& pr, bool positive, double lr) {
    const double x = kernels::dot(emb.source.row(pr.i), emb.target.row(pr.j));
    const double p = 1.0 / (1.0 + std::exp(-x));
    const double g = pr.weight * (positive ? p - 1.0 : p);
    const Vector src(emb.source.row(pr.i).begin(), emb.source.row(pr.i).end());
    kernels::axpy(-lr * g, emb.target.row(pr.j), emb.source.row(pr.i));
    kernels::axpy(-lr * g, src, emb.target.row(pr.j));
}

}  // namespace

NodeEmbeddings init_embeddings(std::size_t v, std::size_t d, Rng& rng) {
    if (d == 0) throw ValidationError("embedding dimension must be >= 1");
    NodeEmbeddings emb(v, d);
    const double r = 0.5 / static_cast<double>(d);
    for (double& x : emb.source.data()) x = rng.uniform(-r, r);
    for (double& x : emb.target.data()) x = rng.uniform(-r, r);
    return emb;
}

EmbedTrainingResult train_embeddings(const AdjacencyEstimate& adj, const EmbedConfig& cfg) {
    Rng rng(cfg.seed);
    return train_embeddings(adj, cfg, rng);
}

EmbedTrainingResult train_embeddings(const AdjacencyEstimate& adj, const EmbedConfig& cfg, Rng& rng) {
    const auto edges = edge_list(adj, cfg.min_edge_count);
    if (edges.empty()) throw ValidationError("train_embeddings: adjacency has no positive entry");

    NodeEmbeddings emb = init_embeddings(adj.num_nodes, cfg.dim, rng);
    const auto negatives = sample_negatives(adj, edges, cfg.neg_samples, rng);

    EmbedTrainingResult result;
    double best = embed_loss(emb, edges, negatives, cfg.l2);
    if (!std::isfinite(best)) throw NumericalError("divergence; lower learning_rate");
    result.loss_trace.push_back(best);
    result.embeddings = emb;

    const bool stochastic = edges.size() > cfg.sgd_edge_threshold;
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // sample_negatives emits exactly neg_samples per edge unless a row has no
    // non-edges; the per-edge SGD path only pairs them up in the regular case.
    const std::size_t per_edge =
        negatives.size() == edges.size() * cfg.neg_samples ? cfg.neg_samples : 0;

    EmbedGradient grad;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (!stochastic) {
            (void)embed_loss(emb, edges, negatives, cfg.l2, &grad);
            kernels::axpy(-cfg.learning_rate, grad.source.data(), emb.source.data());
            kernels::axpy(-cfg.learning_rate, grad.target.data(), emb.target.data());
        } else {
            rng.shuffle(std::span<std::size_t>(order));
            // Per-edge step; the regulariser is spread evenly over the edges.
            const double l2_share = cfg.l2 / static_cast<double>(edges.size());
            for (std::size_t idx : order) {
                const WeightedPair& e = edges[idx];
                sgd_step(emb, e, true, cfg.learning_rate);
                if (per_edge > 0) {
                    for (std::size_t m = 0; m < per_edge; ++m) {
                        sgd_step(emb, negatives[idx * per_edge + m], false, cfg.learning_rate);
                    }
                }
                if (l2_share > 0.0) {
                    const double shrink = 1.0 - cfg.learning_rate * 2.0 * l2_share;
                    for (double& x : emb.source.row(e.i)) x *= shrink;
                    for (double& x : emb.target.row(e.j)) x *= shrink;
                }
            }
        }
        const double loss = embed_loss(emb, edges, negatives, cfg.l2);
        if (!std::isfinite(loss) || !emb.source.all_finite() || !emb.target.all_finite()) {
            throw NumericalError("divergence; lower learning_rate (epoch " + std::to_string(epoch) + ")");
        }
        result.loss_trace.push_back(loss);
        if (loss < best) {
            best = loss;
            result.embeddings = emb;
            result.best_epoch = epoch;
        }
    }
    return result;
}

}  // namespace gbtpp
