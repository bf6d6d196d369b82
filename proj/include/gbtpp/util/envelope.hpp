#pragma once

// Self-describing model file shared by every model kind:
//
//   {"format": "gbtpp-model", "version": 1, "model_kind": "<kind>", ...payload}
//
// Doubles are written in shortest round-trip decimal form, so a save/load
// cycle reproduces every parameter bit for bit.

#include <filesystem>
#include <string>

#include <json.hpp>

namespace gbtpp {

inline constexpr int kEnvelopeVersion = 1;

struct Envelope {
    std::string model_kind;
    nlohmann::json payload;  // object; the envelope keys are stripped
};

void save_envelope(const Envelope& env, const std::filesystem::path& path);
[[nodiscard]] std::string dump_envelope(const Envelope& env);

/// Throws ParseError / ValidationError on malformed files or version mismatch.
[[nodiscard]] Envelope load_envelope(const std::filesystem::path& path);
[[nodiscard]] Envelope parse_envelope(const std::string& text);

/// Reads a vector of doubles of the given length from json; throws ValidationError otherwise.
[[nodiscard]] std::vector<double> json_doubles(const nlohmann::json& j, std::size_t expected,
                                               const std::string& what);

}  // namespace gbtpp
