#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gbtpp/model/gbtpp.hpp"
#include "gbtpp/model/train.hpp"
#include "gbtpp/util/envelope.hpp"

namespace gbtpp {

// Payload of a recurrent-model file (inside the shared envelope, model_kind
// gbtpp | nrpp | rmtpp):
//   dims        {"V", "d", "H", "D_em"}
//   time        {"feature", "scale", "weight"}
//   embeddings  path of the embedding CSV the model was trained against
//   config      training configuration (informational)
//   params      {"W_em": [...row-major...], ..., "b_t": [x]}

struct Checkpoint {
    GbtppModel model;
    std::string embeddings_path;
    nlohmann::json config;  // may be null
};

[[nodiscard]] nlohmann::json train_config_to_json(const TrainConfig& cfg);

[[nodiscard]] Envelope checkpoint_envelope(const Checkpoint& ck);
[[nodiscard]] Checkpoint checkpoint_from_envelope(const Envelope& env);

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path);
[[nodiscard]] Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gbtpp
