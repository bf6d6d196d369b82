#include "gbtpp/util/envelope.hpp"

#include <fstream>
#include <sstream>

#include "gbtpp/error.hpp"

namespace gbtpp {

std::string dump_envelope(const Envelope& env) {
    nlohmann::json j = env.payload;
    j["format"] = "gbtpp-model";
    j["version"] = kEnvelopeVersion;
    j["model_kind"] = env.model_kind;
    return j.dump(1) + "\n";
}

void save_envelope(const Envelope& env, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << dump_envelope(env);
    if (!out) throw Error("write failed: " + path.string());
}

Envelope parse_envelope(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "gbtpp-model") {
        throw ValidationError("not a gbtpp model file");
    }
    if (j.value("version", 0) != kEnvelopeVersion) {
        throw ValidationError("unsupported model file version " + j["version"].dump());
    }
    if (!j.contains("model_kind") || !j["model_kind"].is_string()) {
        throw ValidationError("model file has no model_kind");
    }
    Envelope env;
    env.model_kind = j["model_kind"].get<std::string>();
    j.erase("format");
    j.erase("version");
    j.erase("model_kind");
    env.payload = std::move(j);
    return env;
}

Envelope load_envelope(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_envelope(ss.str());
}

std::vector<double> json_doubles(const nlohmann::json& j, std::size_t expected, const std::string& what) {
    if (!j.is_array() || j.size() != expected) {
        throw ValidationError(what + ": expected an array of " + std::to_string(expected) + " numbers");
    }
    std::vector<double> out;
    out.reserve(expected);
    for (const auto& x : j) {
        if (!x.is_number()) throw ValidationError(what + ": non-numeric entry");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace gbtpp
