#include "gbtpp/core/kfold.hpp"

#include <numeric>
#include <ostream>

#include "gbtpp/error.hpp"
#include "gbtpp/numerics/rng.hpp"

namespace gbtpp {

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) out.push_back(i);
    }
    return out;
}

FoldAssignment kfold_split(const CascadeDataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("kfold_split: k must be >= 2");
    if (ds.cascades.size() < k) {
        throw ValidationError("kfold_split: " + std::to_string(ds.cascades.size()) +
                              " cascades is fewer than k=" + std::to_string(k));
    }
    std::vector<std::size_t> order(ds.cascades.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(order.size(), 0);
    for (std::size_t pos = 0; pos < order.size(); ++pos) fa.fold_of[order[pos]] = pos % k;
    return fa;
}

void write_fold_assignment(const CascadeDataset& ds, const FoldAssignment& folds, std::ostream& out) {
    out << "seq_id,fold\n";
    for (std::size_t i = 0; i < ds.cascades.size(); ++i) {
        out << ds.cascades[i].seq_id << ',' << folds.fold_of[i] << '\n';
    }
}

}  // namespace gbtpp
