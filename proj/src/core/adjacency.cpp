#include "gbtpp/core/adjacency.hpp"

#include <algorithm>

#include "gbtpp/error.hpp"

namespace gbtpp {

double AdjacencyEstimate::total_weight() const noexcept {
    double s = 0.0;
    for (double w : weights.data()) s += w;
    return s;
}

AdjacencyEstimate estimate_adjacency(const CascadeDataset& ds) {
    if (ds.cascades.empty()) throw ValidationError("estimate_adjacency: empty dataset");
    const std::size_t v = ds.num_nodes;
    AdjacencyEstimate adj;
    adj.num_nodes = v;
    adj.counts.assign(v * v, 0);
    for (const auto& c : ds.cascades) {
        for (std::size_t k = 1; k < c.events.size(); ++k) {
            ++adj.counts[c.events[k - 1].node * v + c.events[k].node];
        }
    }
    adj.n_max = adj.counts.empty() ? 0 : *std::max_element(adj.counts.begin(), adj.counts.end());
    if (adj.n_max == 0) throw ValidationError("estimate_adjacency: no observed propagations");
    adj.weights = DenseMatrix(v, v);
    for (std::size_t i = 0; i < v * v; ++i) {
        adj.weights.data()[i] = static_cast<double>(adj.counts[i]) / static_cast<double>(adj.n_max);
    }
    return adj;
}

}  // namespace gbtpp
