#include "gbtpp/eval/metrics.hpp"

#include <cmath>
#include <string>

#include "gbtpp/error.hpp"

namespace gbtpp {

std::size_t rank_of(std::span<const double> probs, NodeId true_node) {
    if (true_node >= probs.size()) throw ValidationError("true node outside the distribution");
    const double pt = probs[true_node];
    std::size_t rank = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] > pt || (probs[k] == pt && k < true_node)) ++rank;
    }
    return rank;
}

void attach_distribution(PredictionRecord& r, Vector probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    if (!(std::abs(total - 1.0) <= 1e-6)) {
        throw ValidationError("prediction distribution of model " + r.model + " sums to " + std::to_string(total));
    }
    r.true_rank = rank_of(probs, r.true_node);
    r.probabilities = std::move(probs);
}

double node_accuracy(std::span<const PredictionRecord> records) {
    std::size_t n = 0, hit = 0;
    for (const auto& r : records) {
        if (!r.pred_node) continue;
        ++n;
        if (*r.pred_node == r.true_node) ++hit;
    }
    if (n == 0) throw ValidationError("node_accuracy: no node predictions");
    return static_cast<double>(hit) / static_cast<double>(n);
}

double time_rmse(std::span<const PredictionRecord> records) {
    std::size_t n = 0;
    double sum = 0.0;
    for (const auto& r : records) {
        if (!r.pred_time) continue;
        const double e = *r.pred_time - r.true_time;
        if (!std::isfinite(e)) throw ValidationError("time_rmse: non-finite time in record " + r.sample_id);
        sum += e * e;
        ++n;
    }
    if (n == 0) throw ValidationError("time_rmse: no time predictions");
    return std::sqrt(sum / static_cast<double>(n));
}

double topk_precision(std::span<const PredictionRecord> records, std::size_t k) {
    if (records.empty()) throw ValidationError("topk_precision: no records");
    if (k == 0) throw ValidationError("topk_precision: K must be >= 1");
    std::size_t hit = 0;
    for (const auto& r : records) {
        std::size_t rank = 0;
        if (r.true_rank) {
            rank = *r.true_rank;
        } else if (r.probabilities) {
            if (k > r.probabilities->size()) throw ValidationError("topk_precision: K exceeds V");
            rank = rank_of(*r.probabilities, r.true_node);
        } else {
            throw ValidationError("topk_precision: record " + r.sample_id + " has no prob_vector");
        }
        if (rank < k) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(records.size());
}

}  // namespace gbtpp
