#include "gbtpp/baselines/markov.hpp"

#include <string>

#include "gbtpp/error.hpp"

namespace gbtpp {
namespace {

std::vector<NodeId> context(std::span<const Event> prefix, std::size_t m) {
    std::vector<NodeId> key;
    key.reserve(m);
    for (std::size_t i = prefix.size() - m; i < prefix.size(); ++i) key.push_back(prefix[i].node);
    return key;
}

Vector smoothed(const Vector& counts, double s) {
    double total = 0.0;
    for (double c : counts) total += c;
    const double denom = total + s * static_cast<double>(counts.size());
    Vector p(counts.size());
    if (denom <= 0.0) {
        const double u = 1.0 / static_cast<double>(counts.size());
        for (double& x : p) x = u;
        return p;
    }
    for (std::size_t k = 0; k < counts.size(); ++k) p[k] = (counts[k] + s) / denom;
    return p;
}

const Vector* lookup(const MarkovModel& m, std::span<const Event> prefix, std::size_t& used) {
    for (std::size_t len = std::min(m.order, prefix.size()); len >= 1; --len) {
        const auto& table = m.tables[len - 1];
        const auto it = table.find(context(prefix, len));
        if (it != table.end()) {
            used = len;
            return &it->second;
        }
    }
    used = 0;
    return &m.global;
}

}  // namespace

MarkovModel fit_markov(std::span<const PropagationSample> samples, std::size_t num_nodes, std::size_t order,
                       double smoothing) {
    if (order < 1 || order > 3) throw ValidationError("Markov order must be 1, 2 or 3 (got " + std::to_string(order) + ")");
    if (!(smoothing >= 0.0)) throw ValidationError("Markov smoothing must be nonnegative");
    if (num_nodes == 0) throw ValidationError("Markov model needs at least one node");
    MarkovModel m;
    m.order = order;
    m.num_nodes = num_nodes;
    m.smoothing = smoothing;
    m.tables.resize(order);
    m.global.assign(num_nodes, 0.0);
    for (const auto& s : samples) {
        const auto prefix = s.prefix();
        const NodeId label = s.label_node();
        if (label >= num_nodes) throw ValidationError("label node out of range");
        m.global[label] += 1.0;
        for (std::size_t len = 1; len <= std::min(order, prefix.size()); ++len) {
            auto [it, inserted] = m.tables[len - 1].try_emplace(context(prefix, len), Vector(num_nodes, 0.0));
            it->second[label] += 1.0;
        }
    }
    return m;
}

Vector predict_markov(const MarkovModel& m, std::span<const Event> prefix) {
    std::size_t used = 0;
    return smoothed(*lookup(m, prefix, used), m.smoothing);
}

std::size_t markov_context_used(const MarkovModel& m, std::span<const Event> prefix) {
    std::size_t used = 0;
    (void)lookup(m, prefix, used);
    return used;
}

}  // namespace gbtpp
