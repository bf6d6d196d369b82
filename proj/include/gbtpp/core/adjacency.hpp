#pragma once

#include <cstdint>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

/// Empirical directed edge weights A_ij = N_ij / N_max, where N_ij counts
/// consecutive (i -> j) pairs across all cascades, self-loops included.
struct AdjacencyEstimate {
    std::size_t num_nodes = 0;
    DenseMatrix weights;
    std::vector<std::uint64_t> counts;  // row-major V x V
    std::uint64_t n_max = 0;

    [[nodiscard]] std::uint64_t count(std::size_t i, std::size_t j) const noexcept {
        return counts[i * num_nodes + j];
    }
    [[nodiscard]] double weight(std::size_t i, std::size_t j) const noexcept { return weights(i, j); }
    [[nodiscard]] double total_weight() const noexcept;
};

/// Throws ValidationError when the dataset has no consecutive pair at all.
[[nodiscard]] AdjacencyEstimate estimate_adjacency(const CascadeDataset& ds);

}  // namespace gbtpp
