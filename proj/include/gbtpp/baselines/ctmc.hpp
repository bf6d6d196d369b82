#pragma once

#include <span>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/core/samples.hpp"
#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

/// Continuous-time Markov chain over nodes.
///
/// q_ij = N_ij / W_i for i != j, where W_i is the total time spent in state i
/// (sum of the gaps that follow visits to i). Self-transitions add sojourn
/// time but no rate, so the diagonal is zero. States with no outgoing rate
/// fall back to the global rates N_.j / W.
struct CtmcModel {
    DenseMatrix rates;      // V x V, zero diagonal
    Vector global_rates;    // V
};

[[nodiscard]] CtmcModel fit_ctmc(std::span<const PropagationSample> samples, std::size_t num_nodes);

struct CtmcPrediction {
    NodeId node = 0;
    double time = 0.0;
    /// Jump-chain probabilities q_ij / sum_j q_ij.
    Vector probabilities;
    bool backed_off = false;
};

/// Next node = argmax_j q_ij (lowest id on ties), time = t_current + 1 / sum_j q_ij.
[[nodiscard]] CtmcPrediction predict_ctmc(const CtmcModel& m, NodeId current, double t_current);

}  // namespace gbtpp
