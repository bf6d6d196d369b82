#pragma once

#include <map>
#include <span>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/core/samples.hpp"
#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

/// Order-k Markov chain over next nodes with additive smoothing and backoff.
///
/// tables[m - 1] maps a context of the last m nodes (oldest first, current
/// node last) to next-node counts, for m = 1..order. Prediction uses the
/// longest observed context and falls back to the global next-node counts.
struct MarkovModel {
    std::size_t order = 1;
    std::size_t num_nodes = 0;
    double smoothing = 0.1;
    std::vector<std::map<std::vector<NodeId>, Vector>> tables;
    Vector global;
};

/// Throws ValidationError unless order is 1, 2 or 3.
[[nodiscard]] MarkovModel fit_markov(std::span<const PropagationSample> samples, std::size_t num_nodes,
                                     std::size_t order, double smoothing = 0.1);

/// (count + s) / (total + s V) for the longest context of `prefix` (history
/// then current event) seen in training.
[[nodiscard]] Vector predict_markov(const MarkovModel& m, std::span<const Event> prefix);

/// Context length actually used for `prefix` (0 means the global fallback).
[[nodiscard]] std::size_t markov_context_used(const MarkovModel& m, std::span<const Event> prefix);

}  // namespace gbtpp
