#pragma once

#include "gbtpp/model/train.hpp"

namespace gbtpp {

/// Recurrent point process without node-embedding inputs or graph bias:
/// W_y, v_y and U_h are held at zero and never updated.
[[nodiscard]] TrainConfig rmtpp_variant(TrainConfig cfg);

/// GBTPP without the graph bias term (U_h held at zero); still consumes node
/// embeddings in the history and intensity.
[[nodiscard]] TrainConfig nrpp_variant(TrainConfig cfg);

}  // namespace gbtpp
