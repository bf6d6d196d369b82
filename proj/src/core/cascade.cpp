#include "gbtpp/core/cascade.hpp"

#include <cmath>

#include "gbtpp/error.hpp"

namespace gbtpp {

std::size_t CascadeDataset::num_events() const noexcept {
    std::size_t n = 0;
    for (const auto& c : cascades) n += c.size();
    return n;
}

CascadeDataset CascadeDataset::subset(std::span<const std::size_t> indices) const {
    CascadeDataset out;
    out.num_nodes = num_nodes;
    out.node_names = node_names;
    out.cascades.reserve(indices.size());
    for (std::size_t i : indices) out.cascades.push_back(cascades.at(i));
    return out;
}

void validate(const Cascade& c, std::size_t num_nodes) {
    if (c.events.size() < 2) {
        throw ValidationError("cascade '" + c.seq_id + "' has fewer than 2 events");
    }
    for (std::size_t i = 0; i < c.events.size(); ++i) {
        const Event& e = c.events[i];
        if (e.node >= num_nodes) {
            throw ValidationError("cascade '" + c.seq_id + "': node id " + std::to_string(e.node) +
                                  " >= V=" + std::to_string(num_nodes));
        }
        if (!std::isfinite(e.time) || e.time < 0.0) {
            throw ValidationError("cascade '" + c.seq_id + "': invalid time at event " +
                                  std::to_string(i));
        }
        if (i > 0 && !(e.time > c.events[i - 1].time)) {
            throw ValidationError("cascade '" + c.seq_id + "': non-increasing times at event " +
                                  std::to_string(i));
        }
    }
}

void validate(const CascadeDataset& ds) {
    if (ds.num_nodes == 0) throw ValidationError("dataset has no nodes");
    if (ds.cascades.empty()) throw ValidationError("no cascades");
    for (const auto& c : ds.cascades) validate(c, ds.num_nodes);
}

}  // namespace gbtpp
