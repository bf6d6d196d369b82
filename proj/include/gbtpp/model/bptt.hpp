#pragma once

#include <span>

#include "gbtpp/model/gbtpp.hpp"

namespace gbtpp {

/// `count` consecutive samples of one cascade starting at sample `first`.
/// `h_in` is the state for sample `first` and is treated as a constant: no
/// gradient flows into the part of the cascade before the window.
struct BpttWindow {
    const Cascade* cascade = nullptr;
    std::size_t first = 0;
    std::size_t count = 0;
    Vector h_in;
};

struct BpttResult {
    /// Negative windowed log-likelihood, sum over the window's samples of
    /// -(log P + time_weight * log f), in data time units.
    double loss = 0.0;
    GbtppParams grad;
    /// State for sample first + count (empty when the window ends the cascade).
    Vector h_next;
};

/// Exact gradient of the windowed loss with respect to every parameter.
/// Fields masked under the model kind get a zero gradient. Embeddings are
/// constants. Throws NumericalError on a non-finite gradient.
[[nodiscard]] BpttResult bptt_gradients(const GbtppModel& m, const NodeEmbeddings& emb, const BpttWindow& w);

/// Windowed loss only (no gradient); same value as BpttResult::loss.
[[nodiscard]] double window_loss(const GbtppModel& m, const NodeEmbeddings& emb, const BpttWindow& w);

/// Splits a cascade's samples into windows of at most `len`, with h_in left
/// empty (the trainer threads states through).
[[nodiscard]] std::vector<BpttWindow> make_windows(const Cascade& c, std::size_t len);

}  // namespace gbtpp
