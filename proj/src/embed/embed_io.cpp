#include <fstream>
#include <istream>
#include <ostream>

#include "gbtpp/embed/embeddings.hpp"
#include "gbtpp/error.hpp"
#include "gbtpp/util/format.hpp"

namespace gbtpp {

void write_embeddings_csv(const NodeEmbeddings& emb, std::ostream& out) {
    out << "node,role";
    for (std::size_t c = 0; c < emb.dim; ++c) out << ",c" << c;
    out << '\n';
    for (std::size_t i = 0; i < emb.num_nodes; ++i) {
        for (const auto& [role, mat] : {std::pair{'s', &emb.source}, std::pair{'e', &emb.target}}) {
            out << i << ',' << role;
            for (double x : mat->row(i)) out << ',' << format_double(x);
            out << '\n';
        }
    }
}

NodeEmbeddings read_embeddings_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty embedding file", 1);
    ++lineno;
    const auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "node" || header[1] != "role") {
        throw ParseError("expected header node,role,c0..", lineno);
    }
    const std::size_t d = header.size() - 2;
    for (std::size_t c = 0; c < d; ++c) {
        if (header[c + 2] != "c" + std::to_string(c)) throw ParseError("bad column name in header", lineno);
    }
    struct Row {
        std::size_t node;
        char role;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    std::size_t max_node = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != d + 2) throw ParseError("expected " + std::to_string(d + 2) + " columns", lineno);
        Row r;
        try {
            const long long node = parse_int(cols[0]);
            if (node < 0) throw ValidationError("negative node id");
            r.node = static_cast<std::size_t>(node);
            if (cols[1] != "s" && cols[1] != "e") throw ValidationError("role must be s or e");
            r.role = cols[1][0];
            r.values.reserve(d);
            for (std::size_t c = 0; c < d; ++c) r.values.push_back(parse_double(cols[c + 2]));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), lineno);
        }
        max_node = std::max(max_node, r.node);
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ValidationError("embedding file has no rows");
    NodeEmbeddings emb(max_node + 1, d);
    std::vector<unsigned char> seen(2 * (max_node + 1), 0);
    for (const auto& r : rows) {
        auto& mat = r.role == 's' ? emb.source : emb.target;
        auto& flag = seen[2 * r.node + (r.role == 's' ? 0 : 1)];
        if (flag) throw ValidationError("duplicate embedding row for node " + std::to_string(r.node));
        flag = 1;
        std::copy(r.values.begin(), r.values.end(), mat.row(r.node).begin());
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            throw ValidationError("embedding file is missing the " + std::string(i % 2 ? "e" : "s") +
                                  " row of node " + std::to_string(i / 2));
        }
    }
    return emb;
}

void save_embeddings(const NodeEmbeddings& emb, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_embeddings_csv(emb, out);
}

NodeEmbeddings load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_embeddings_csv(in);
}

}  // namespace gbtpp
