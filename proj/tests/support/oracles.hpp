#pragma once

// Independent re-implementations used as test oracles. Written with plain
// loops over the documented parameter layout; none of them calls the model's
// forward code or the SIMD kernels.

#include <cstdint>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/embed/embeddings.hpp"
#include "gbtpp/model/gbtpp.hpp"
#include "gbtpp/sim/hawkes_sim.hpp"

namespace oracle {

using gbtpp::Cascade;
using gbtpp::GbtppModel;
using gbtpp::GbtppParams;
using gbtpp::NodeEmbeddings;
using gbtpp::Vector;

/// h = max(W_v^T (W_em[node] + b_em) + W_y^T y + W_t tfeat + W_h^T h_prev + b_h, 0)
Vector step(const GbtppParams& p, const Vector& h_prev, std::uint32_t node, double tfeat, const Vector& y);

/// V_h h + b_out + ReLU(U_h[cur] . h) sigmoid(src_cur . tgt_k)
Vector logits(const GbtppParams& p, const Vector& h, const NodeEmbeddings& emb, std::uint32_t cur);

/// -log f for the exponential-in-time intensity, by its closed form.
double time_nll(double c, double w, double d);

/// Windowed negative log-likelihood, straight-line.
double window_loss(const GbtppModel& m, const NodeEmbeddings& emb, const Cascade& c, std::size_t first,
                   std::size_t count, const Vector& h_in);

/// Random cascade over V nodes with n events and exponential gaps.
Cascade random_cascade(std::size_t v, std::size_t n, std::uint64_t seed);

/// Random embeddings with entries uniform in [-r, r].
NodeEmbeddings random_embeddings(std::size_t v, std::size_t d, double r, std::uint64_t seed);

/// Probability that the next event of a multivariate Hawkes process lands on
/// each node, given the full history `prefix` (process started at time 0).
Vector hawkes_next_node_probs(const gbtpp::HawkesParams& p, const std::vector<gbtpp::Event>& prefix);

/// Accuracy of the argmax of hawkes_next_node_probs over every sample of the
/// dataset: the best any predictor can do on average with the true model.
double hawkes_bayes_accuracy(const gbtpp::HawkesParams& p, const gbtpp::CascadeDataset& ds,
                             std::size_t max_samples = 0);

}  // namespace oracle
