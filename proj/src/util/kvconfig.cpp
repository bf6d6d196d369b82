#include "gbtpp/util/kvconfig.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "gbtpp/error.hpp"
#include "gbtpp/util/format.hpp"

namespace gbtpp {

KvConfig KvConfig::parse(std::istream& in) {
    KvConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", lineno);
        const std::string key(trim(t.substr(0, eq)));
        if (key.empty()) throw ParseError("empty key", lineno);
        if (cfg.contains(key)) throw ParseError("duplicate key '" + key + "'", lineno);
        cfg.values_[key] = std::string(trim(t.substr(eq + 1)));
    }
    return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    return parse(in);
}

std::optional<std::string> KvConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void KvConfig::write(std::ostream& out) const {
    for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
}

}  // namespace gbtpp
