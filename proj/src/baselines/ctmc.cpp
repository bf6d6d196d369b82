#include "gbtpp/baselines/ctmc.hpp"

#include <string>

#include "gbtpp/error.hpp"
#include "gbtpp/numerics/activations.hpp"

namespace gbtpp {

CtmcModel fit_ctmc(std::span<const PropagationSample> samples, std::size_t num_nodes) {
    if (num_nodes == 0) throw ValidationError("CTMC needs at least one node");
    DenseMatrix counts(num_nodes, num_nodes);
    Vector sojourn(num_nodes, 0.0);
    Vector global(num_nodes, 0.0);
    double total_time = 0.0;
    for (const auto& s : samples) {
        const NodeId i = s.current_node();
        const NodeId j = s.label_node();
        if (i >= num_nodes || j >= num_nodes) throw ValidationError("CTMC sample node out of range");
        const double gap = s.label_time() - s.current().time;
        sojourn[i] += gap;
        total_time += gap;
        if (i != j) {
            counts(i, j) += 1.0;
            global[j] += 1.0;
        }
    }
    CtmcModel m;
    m.rates = DenseMatrix(num_nodes, num_nodes);
    m.global_rates.assign(num_nodes, 0.0);
    for (std::size_t i = 0; i < num_nodes; ++i) {
        if (!(sojourn[i] > 0.0)) continue;
        for (std::size_t j = 0; j < num_nodes; ++j) m.rates(i, j) = counts(i, j) / sojourn[i];
    }
    if (total_time > 0.0) {
        for (std::size_t j = 0; j < num_nodes; ++j) m.global_rates[j] = global[j] / total_time;
    }
    return m;
}

CtmcPrediction predict_ctmc(const CtmcModel& m, NodeId current, double t_current) {
    const std::size_t V = m.global_rates.size();
    if (current >= V) throw ValidationError("node " + std::to_string(current) + " out of range");
    CtmcPrediction out;
    Vector q(m.rates.row(current).begin(), m.rates.row(current).end());
    double total = 0.0;
    for (double x : q) total += x;
    if (!(total > 0.0)) {
        q = m.global_rates;
        total = 0.0;
        for (double x : q) total += x;
        out.backed_off = true;
    }
    if (!(total > 0.0)) {
        // No transition was ever observed: uniform, no finite time.
        out.probabilities.assign(V, 1.0 / static_cast<double>(V));
        out.node = 0;
        out.time = t_current;
        return out;
    }
    out.probabilities.resize(V);
    for (std::size_t j = 0; j < V; ++j) out.probabilities[j] = q[j] / total;
    out.node = static_cast<NodeId>(argmax(out.probabilities));
    out.time = t_current + 1.0 / total;
    return out;
}

}  // namespace gbtpp
