#include "gbtpp/core/samples.hpp"

#include "gbtpp/error.hpp"

namespace gbtpp {

std::vector<PropagationSample> make_samples(const Cascade& c) {
    if (c.events.size() < 2) throw ValidationError("make_samples: cascade '" + c.seq_id + "' too short");
    std::vector<PropagationSample> out;
    out.reserve(c.events.size() - 1);
    for (std::size_t j = 0; j + 1 < c.events.size(); ++j) out.push_back({&c, j});
    return out;
}

std::vector<PropagationSample> make_samples(const CascadeDataset& ds) {
    std::vector<PropagationSample> out;
    for (const auto& c : ds.cascades) {
        auto s = make_samples(c);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

}  // namespace gbtpp
