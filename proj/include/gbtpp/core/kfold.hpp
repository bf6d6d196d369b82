#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gbtpp/core/cascade.hpp"

namespace gbtpp {

/// Cascade-level partition into k folds whose sizes differ by at most one.
struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> fold_of;  // cascade index -> fold id

    [[nodiscard]] std::vector<std::size_t> test_indices(std::size_t fold) const;
    [[nodiscard]] std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Random permutation (seeded), then round-robin assignment.
[[nodiscard]] FoldAssignment kfold_split(const CascadeDataset& ds, std::size_t k, std::uint64_t seed);

/// CSV seq_id,fold
void write_fold_assignment(const CascadeDataset& ds, const FoldAssignment& folds, std::ostream& out);

}  // namespace gbtpp
