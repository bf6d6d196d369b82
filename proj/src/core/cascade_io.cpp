#include "gbtpp/core/cascade_io.hpp"

#include <fstream>
#include <limits>
#include <optional>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "gbtpp/error.hpp"
#include "gbtpp/util/format.hpp"

namespace gbtpp {
namespace {

using nlohmann::json;

/// Collects raw (label, time) events and resolves labels to dense ids at the end.
class DatasetBuilder {
public:
    struct RawEvent {
        std::string name;
        long long id = -1;
        double time = 0.0;
    };
    struct RawCascade {
        std::string seq_id;
        std::size_t line = 0;
        std::vector<RawEvent> events;
    };

    void set_declared_v(long long v, std::size_t line) {
        if (v < 1) throw ParseError("meta.V must be >= 1", line);
        declared_v_ = static_cast<std::size_t>(v);
    }

    void add(RawCascade c) { cascades_.push_back(std::move(c)); }

    void note_kind(bool is_name, std::size_t line) {
        if (kind_ == Kind::unknown) {
            kind_ = is_name ? Kind::names : Kind::ids;
        } else if ((kind_ == Kind::names) != is_name) {
            throw ParseError("mixed integer and string node ids", line);
        }
    }

    CascadeDataset finish() {
        if (cascades_.empty()) throw ValidationError("no cascades");
        CascadeDataset ds;
        std::unordered_map<std::string, NodeId> index;
        std::size_t max_id = 0;
        for (auto& rc : cascades_) {
            Cascade c;
            c.seq_id = rc.seq_id;
            c.events.reserve(rc.events.size());
            for (auto& e : rc.events) {
                NodeId id = 0;
                if (kind_ == Kind::names) {
                    auto [it, inserted] = index.try_emplace(e.name, static_cast<NodeId>(ds.node_names.size()));
                    if (inserted) ds.node_names.push_back(e.name);
                    id = it->second;
                } else {
                    if (declared_v_ && static_cast<std::size_t>(e.id) >= *declared_v_) {
                        throw ParseError("cascade '" + rc.seq_id + "': node id " + std::to_string(e.id) +
                                             " >= declared V=" + std::to_string(*declared_v_),
                                         rc.line);
                    }
                    id = static_cast<NodeId>(e.id);
                }
                max_id = std::max<std::size_t>(max_id, id);
                c.events.push_back({id, e.time});
            }
            try {
                validate(c, std::numeric_limits<std::size_t>::max());
            } catch (const ValidationError& err) {
                throw ParseError(err.what(), rc.line);
            }
            ds.cascades.push_back(std::move(c));
        }
        if (kind_ == Kind::names) {
            ds.num_nodes = ds.node_names.size();
            if (declared_v_ && *declared_v_ < ds.num_nodes) {
                throw ValidationError("declared V=" + std::to_string(*declared_v_) + " but " +
                                      std::to_string(ds.num_nodes) + " distinct node names");
            }
            if (declared_v_) ds.num_nodes = *declared_v_;
        } else {
            ds.num_nodes = declared_v_ ? *declared_v_ : max_id + 1;
        }
        return ds;
    }

private:
    enum class Kind { unknown, ids, names };
    Kind kind_ = Kind::unknown;
    std::optional<std::size_t> declared_v_;
    std::vector<RawCascade> cascades_;
};

void parse_node_token(const json& v, DatasetBuilder& b, DatasetBuilder::RawEvent& e, std::size_t line) {
    if (v.is_number_integer() || v.is_number_unsigned()) {
        const long long id = v.get<long long>();
        if (id < 0) throw ParseError("negative node id", line);
        b.note_kind(false, line);
        e.id = id;
    } else if (v.is_string()) {
        b.note_kind(true, line);
        e.name = v.get<std::string>();
    } else {
        throw ParseError("node must be an integer or string", line);
    }
}

CascadeDataset parse_jsonl(std::istream& in) {
    DatasetBuilder builder;
    std::string line;
    std::size_t lineno = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
        }
        if (!obj.is_object()) throw ParseError("expected a JSON object", lineno);
        if (obj.contains("meta")) {
            if (seen_content) throw ParseError("meta line must come first", lineno);
            const auto& meta = obj["meta"];
            if (!meta.is_object() || !meta.contains("V") || !meta["V"].is_number_integer()) {
                throw ParseError("meta must be {\"V\": int}", lineno);
            }
            builder.set_declared_v(meta["V"].get<long long>(), lineno);
            seen_content = true;
            continue;
        }
        seen_content = true;
        if (!obj.contains("seq_id") || !obj.contains("events")) {
            throw ParseError("missing seq_id or events", lineno);
        }
        DatasetBuilder::RawCascade rc;
        rc.line = lineno;
        const auto& sid = obj["seq_id"];
        if (sid.is_string()) {
            rc.seq_id = sid.get<std::string>();
        } else if (sid.is_number_integer()) {
            rc.seq_id = std::to_string(sid.get<long long>());
        } else {
            throw ParseError("seq_id must be a string", lineno);
        }
        const auto& evs = obj["events"];
        if (!evs.is_array()) throw ParseError("events must be an array", lineno);
        for (const auto& ev : evs) {
            if (!ev.is_array() || ev.size() != 2 || !ev[1].is_number()) {
                throw ParseError("each event must be [node, time]", lineno);
            }
            DatasetBuilder::RawEvent e;
            parse_node_token(ev[0], builder, e, lineno);
            e.time = ev[1].get<double>();
            rc.events.push_back(std::move(e));
        }
        builder.add(std::move(rc));
    }
    return builder.finish();
}

CascadeDataset parse_csv(std::istream& in) {
    DatasetBuilder builder;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::map<std::string, bool> finished;
    DatasetBuilder::RawCascade current;
    bool have_current = false;

    struct Row {
        std::string seq, node;
        double time;
        std::size_t line;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cols = split_csv(line);
        if (!header) {
            if (cols.size() != 3 || cols[0] != "seq_id" || cols[1] != "node" || cols[2] != "time") {
                throw ParseError("expected header seq_id,node,time", lineno);
            }
            header = true;
            continue;
        }
        if (cols.size() != 3) throw ParseError("expected 3 columns", lineno);
        double t = 0.0;
        try {
            t = parse_double(cols[2]);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), lineno);
        }
        if (cols[1].empty()) throw ParseError("empty node field", lineno);
        rows.push_back({std::string(cols[0]), std::string(cols[1]), t, lineno});
    }
    if (!header) throw ValidationError("no cascades");

    bool all_ints = true;
    for (const auto& r : rows) {
        long long v = 0;
        if (!try_parse_int(r.node, v) || v < 0) {
            all_ints = false;
            break;
        }
    }
    for (const auto& r : rows) {
        if (!have_current || r.seq != current.seq_id) {
            if (have_current) {
                finished[current.seq_id] = true;
                builder.add(std::move(current));
            }
            if (finished.count(r.seq)) {
                throw ParseError("rows for seq_id '" + r.seq + "' are not contiguous", r.line);
            }
            current = {};
            current.seq_id = r.seq;
            current.line = r.line;
            have_current = true;
        }
        DatasetBuilder::RawEvent e;
        e.time = r.time;
        if (all_ints) {
            builder.note_kind(false, r.line);
            e.id = parse_int(r.node);
        } else {
            builder.note_kind(true, r.line);
            e.name = r.node;
        }
        current.events.push_back(std::move(e));
    }
    if (have_current) builder.add(std::move(current));
    return builder.finish();
}

}  // namespace

CascadeFormat format_from_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".json") return CascadeFormat::jsonl;
    if (ext == ".csv") return CascadeFormat::csv;
    throw ValidationError("cannot infer cascade format from '" + path.string() + "'");
}

CascadeDataset parse_cascades(std::istream& in, CascadeFormat format) {
    return format == CascadeFormat::jsonl ? parse_jsonl(in) : parse_csv(in);
}

CascadeDataset parse_cascades(std::string_view text, CascadeFormat format) {
    std::istringstream in{std::string(text)};
    return parse_cascades(in, format);
}

CascadeDataset load_cascades(const std::filesystem::path& path, std::optional<CascadeFormat> format) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_cascades(in, format ? *format : format_from_path(path));
}

void write_cascades_jsonl(const CascadeDataset& ds, std::ostream& out, bool with_meta) {
    if (with_meta) out << "{\"meta\":{\"V\":" << ds.num_nodes << "}}\n";
    for (const auto& c : ds.cascades) {
        out << "{\"seq_id\":" << json(c.seq_id).dump() << ",\"events\":[";
        for (std::size_t i = 0; i < c.events.size(); ++i) {
            if (i) out << ',';
            out << '[' << c.events[i].node << ',' << format_double(c.events[i].time) << ']';
        }
        out << "]}\n";
    }
}

void write_cascades_csv(const CascadeDataset& ds, std::ostream& out) {
    out << "seq_id,node,time\n";
    for (const auto& c : ds.cascades) {
        for (const auto& e : c.events) {
            out << c.seq_id << ',' << e.node << ',' << format_double(e.time) << '\n';
        }
    }
}

void save_cascades(const CascadeDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    if (format_from_path(path) == CascadeFormat::jsonl) {
        write_cascades_jsonl(ds, out);
    } else {
        write_cascades_csv(ds, out);
    }
    if (!out) throw Error("write failed: " + path.string());
}

void write_node_map(const CascadeDataset& ds, std::ostream& out) {
    out << "node,name\n";
    for (std::size_t i = 0; i < ds.node_names.size(); ++i) out << i << ',' << ds.node_names[i] << '\n';
}

}  // namespace gbtpp
