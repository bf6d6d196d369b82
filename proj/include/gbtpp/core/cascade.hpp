#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gbtpp {

using NodeId = std::uint32_t;

struct Event {
    NodeId node = 0;
    double time = 0.0;

    friend bool operator==(const Event&, const Event&) = default;
};

/// One observed propagation sequence. Times strictly increase; at least two
/// events (checked by validate()).
struct Cascade {
    std::string seq_id;
    std::vector<Event> events;

    [[nodiscard]] std::size_t size() const noexcept { return events.size(); }

    friend bool operator==(const Cascade&, const Cascade&) = default;
};

/// Cascades over a shared, dense node universe [0, num_nodes).
struct CascadeDataset {
    std::size_t num_nodes = 0;
    std::vector<Cascade> cascades;
    /// Original node labels when the input used string names; empty otherwise.
    std::vector<std::string> node_names;

    [[nodiscard]] std::size_t size() const noexcept { return cascades.size(); }
    [[nodiscard]] std::size_t num_events() const noexcept;

    /// Dataset restricted to the given cascade indices (same node universe).
    [[nodiscard]] CascadeDataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const CascadeDataset&, const CascadeDataset&) = default;
};

/// Throws ValidationError naming the seq_id if the cascade violates an invariant.
void validate(const Cascade& c, std::size_t num_nodes);
void validate(const CascadeDataset& ds);

}  // namespace gbtpp
