#include "gbtpp/model/checkpoint.hpp"

#include <algorithm>

#include "gbtpp/error.hpp"

namespace gbtpp {

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
    return {{"kind", std::string(model_kind_name(cfg.kind))},
            {"hidden", cfg.hidden},
            {"input_dim", cfg.input_dim},
            {"bptt_len", cfg.bptt_len},
            {"learning_rate", cfg.learning_rate},
            {"epochs", cfg.epochs},
            {"grad_clip", cfg.grad_clip},
            {"time_feature", std::string(time_feature_name(cfg.time_feature))},
            {"seed", cfg.seed},
            {"time_weight", cfg.time_weight},
            {"time_scale", cfg.time_scale},
            {"min_w_t", cfg.min_w_t}};
}

Envelope checkpoint_envelope(const Checkpoint& ck) {
    const auto& m = ck.model;
    const auto& d = m.params.dims();
    nlohmann::json j;
    j["dims"] = {{"V", d.num_nodes}, {"d", d.embed_dim}, {"H", d.hidden}, {"D_em", d.input_dim}};
    j["time"] = {{"feature", std::string(time_feature_name(m.time_feature))},
                 {"scale", m.time_scale},
                 {"weight", m.time_weight}};
    j["embeddings"] = ck.embeddings_path;
    j["config"] = ck.config;
    nlohmann::json params = nlohmann::json::object();
    for (Field f : all_fields()) {
        const auto v = m.params.field(f);
        params[std::string(field_name(f))] = std::vector<double>(v.begin(), v.end());
    }
    j["params"] = std::move(params);
    return {std::string(model_kind_name(m.kind)), std::move(j)};
}

Checkpoint checkpoint_from_envelope(const Envelope& env) {
    Checkpoint ck;
    try {
        ck.model.kind = parse_model_kind(env.model_kind);
        const auto& j = env.payload;
        const auto& dj = j.at("dims");
        const ModelDims dims{dj.at("V").get<std::size_t>(), dj.at("d").get<std::size_t>(),
                             dj.at("H").get<std::size_t>(), dj.at("D_em").get<std::size_t>()};
        if (dims.num_nodes == 0 || dims.embed_dim == 0 || dims.hidden == 0 || dims.input_dim == 0) {
            throw ValidationError("checkpoint has a zero dimension");
        }
        const auto& tj = j.at("time");
        ck.model.time_feature = parse_time_feature(tj.at("feature").get<std::string>());
        ck.model.time_scale = tj.at("scale").get<double>();
        ck.model.time_weight = tj.at("weight").get<double>();
        if (!(ck.model.time_scale > 0.0)) throw ValidationError("checkpoint time scale must be positive");
        ck.embeddings_path = j.value("embeddings", "");
        ck.config = j.value("config", nlohmann::json());
        ck.model.params = GbtppParams(dims);
        const auto& pj = j.at("params");
        for (Field f : all_fields()) {
            const std::string name(field_name(f));
            auto dst = ck.model.params.field(f);
            const auto values = json_doubles(pj.at(name), dst.size(), "parameter " + name);
            std::copy(values.begin(), values.end(), dst.begin());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed checkpoint: ") + e.what());
    }
    if (!ck.model.params.all_finite()) throw ValidationError("checkpoint has non-finite parameters");
    return ck;
}

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
    save_envelope(checkpoint_envelope(ck), path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return checkpoint_from_envelope(load_envelope(path)); }

}  // namespace gbtpp
