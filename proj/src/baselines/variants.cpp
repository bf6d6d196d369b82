#include "gbtpp/baselines/variants.hpp"

namespace gbtpp {

TrainConfig rmtpp_variant(TrainConfig cfg) {
    cfg.kind = ModelKind::rmtpp;
    return cfg;
}

TrainConfig nrpp_variant(TrainConfig cfg) {
    cfg.kind = ModelKind::nrpp;
    return cfg;
}

}  // namespace gbtpp
