#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "gbtpp/core/cascade.hpp"

namespace gbtpp {

enum class CascadeFormat { jsonl, csv };

/// jsonl for .jsonl/.json, csv for .csv; throws otherwise.
[[nodiscard]] CascadeFormat format_from_path(const std::filesystem::path& path);

/// JSONL: one {"seq_id": str, "events": [[node, time], ...]} object per line,
/// optionally preceded by {"meta": {"V": int}}.
/// CSV: header seq_id,node,time; rows grouped by seq_id.
/// Node ids are either all non-negative integers or all strings; strings are
/// mapped to dense ids in order of first appearance (kept in node_names).
[[nodiscard]] CascadeDataset load_cascades(const std::filesystem::path& path,
                                           std::optional<CascadeFormat> format = std::nullopt);
[[nodiscard]] CascadeDataset parse_cascades(std::istream& in, CascadeFormat format);
[[nodiscard]] CascadeDataset parse_cascades(std::string_view text, CascadeFormat format);

void write_cascades_jsonl(const CascadeDataset& ds, std::ostream& out, bool with_meta = true);
void write_cascades_csv(const CascadeDataset& ds, std::ostream& out);
void save_cascades(const CascadeDataset& ds, const std::filesystem::path& path);

/// node,name mapping for datasets loaded with string node labels.
void write_node_map(const CascadeDataset& ds, std::ostream& out);

}  // namespace gbtpp
