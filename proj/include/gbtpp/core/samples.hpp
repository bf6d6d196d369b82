#pragma once

#include <span>
#include <vector>

#include "gbtpp/core/cascade.hpp"

namespace gbtpp {

/// One supervised example cut from a cascade: the events before `position`
/// are the history, event `position` is the current node, event
/// `position + 1` supplies the label node and label time.
///
/// The sample references its cascade rather than copying the prefix.
struct PropagationSample {
    const Cascade* cascade = nullptr;
    std::size_t position = 0;

    [[nodiscard]] std::span<const Event> history() const noexcept {
        return {cascade->events.data(), position};
    }
    [[nodiscard]] const Event& current() const noexcept { return cascade->events[position]; }
    [[nodiscard]] NodeId current_node() const noexcept { return current().node; }
    [[nodiscard]] NodeId label_node() const noexcept { return cascade->events[position + 1].node; }
    [[nodiscard]] double label_time() const noexcept { return cascade->events[position + 1].time; }
    /// history + current, the model input
    [[nodiscard]] std::span<const Event> prefix() const noexcept {
        return {cascade->events.data(), position + 1};
    }
};

/// N-1 samples for a length-N cascade. The cascade must outlive the samples.
[[nodiscard]] std::vector<PropagationSample> make_samples(const Cascade& c);
[[nodiscard]] std::vector<PropagationSample> make_samples(const CascadeDataset& ds);

}  // namespace gbtpp
