#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace gbtpp {

/// Flat "key = value" text config. Blank lines and lines starting with '#'
/// are ignored; keys are unique; later files or flags override by set().
class KvConfig {
public:
    [[nodiscard]] static KvConfig parse(std::istream& in);
    [[nodiscard]] static KvConfig load(const std::filesystem::path& path);

    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
    [[nodiscard]] bool contains(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

    /// Sorted "key = value" lines; parse() reads them back unchanged.
    void write(std::ostream& out) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace gbtpp
