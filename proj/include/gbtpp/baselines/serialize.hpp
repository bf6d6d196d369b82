#pragma once

#include "gbtpp/baselines/ctmc.hpp"
#include "gbtpp/baselines/markov.hpp"
#include "gbtpp/baselines/point_process.hpp"
#include "gbtpp/util/envelope.hpp"

namespace gbtpp {

// Baselines share the model-file envelope; model_kind is one of
// mc1 | mc2 | mc3 | poisson | hawkes | scp | ctmc.

[[nodiscard]] Envelope to_envelope(const MarkovModel& m);
[[nodiscard]] Envelope to_envelope(const PoissonModel& m);
[[nodiscard]] Envelope to_envelope(const HawkesModel& m);
[[nodiscard]] Envelope to_envelope(const ScpModel& m);
[[nodiscard]] Envelope to_envelope(const CtmcModel& m);

/// Each throws ValidationError if the envelope holds a different kind.
[[nodiscard]] MarkovModel markov_from_envelope(const Envelope& env);
[[nodiscard]] PoissonModel poisson_from_envelope(const Envelope& env);
[[nodiscard]] HawkesModel hawkes_from_envelope(const Envelope& env);
[[nodiscard]] ScpModel scp_from_envelope(const Envelope& env);
[[nodiscard]] CtmcModel ctmc_from_envelope(const Envelope& env);

}  // namespace gbtpp
