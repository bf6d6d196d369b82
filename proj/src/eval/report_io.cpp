#include "gbtpp/eval/report_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gbtpp/error.hpp"
#include "gbtpp/util/format.hpp"

namespace gbtpp {

void write_records_csv(std::span<const PredictionRecord> records, std::ostream& out) {
    out << "sample_id,model,fold,true_node,pred_node,true_time,pred_time,true_rank\n";
    for (const auto& r : records) {
        out << r.sample_id << ',' << r.model << ',' << r.fold << ',' << r.true_node << ',';
        if (r.pred_node) out << *r.pred_node;
        out << ',' << format_double(r.true_time) << ',';
        if (r.pred_time) out << format_double(*r.pred_time);
        out << ',';
        if (r.true_rank) out << *r.true_rank;
        out << '\n';
    }
}

std::vector<PredictionRecord> read_records_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) ||
        trim(line) != "sample_id,model,fold,true_node,pred_node,true_time,pred_time,true_rank") {
        throw ParseError("expected the prediction-record header", lineno);
    }
    std::vector<PredictionRecord> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 8) throw ParseError("expected 8 columns", lineno);
        try {
            PredictionRecord r;
            r.sample_id = std::string(cols[0]);
            r.model = std::string(cols[1]);
            r.fold = static_cast<std::size_t>(parse_int(cols[2]));
            r.true_node = static_cast<NodeId>(parse_int(cols[3]));
            if (!cols[4].empty()) r.pred_node = static_cast<NodeId>(parse_int(cols[4]));
            r.true_time = parse_double(cols[5]);
            if (!cols[6].empty()) r.pred_time = parse_double(cols[6]);
            if (!trim(cols[7]).empty()) r.true_rank = static_cast<std::size_t>(parse_int(trim(cols[7])));
            out.push_back(std::move(r));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return out;
}

namespace {

nlohmann::json stat_json(const SummaryStat& s) {
    return {{"folds", s.folds}, {"mean", s.mean}, {"std", s.std}};
}

}  // namespace

void write_report_json(const BenchmarkReport& report, std::ostream& out) {
    nlohmann::json j;
    j["folds"] = report.folds;
    j["seed"] = report.seed;
    j["V"] = report.num_nodes;
    j["max_topk"] = report.max_topk;
    j["std"] = "sample standard deviation over folds (n-1 denominator)";
    j["backoff"] =
        "Markov: longest seen context, then global next-node frequency; CTMC: global rates for states "
        "without outgoing transitions";
    nlohmann::json models = nlohmann::json::array();
    for (const auto& m : report.models) {
        nlohmann::json mj;
        mj["model"] = m.model;
        mj["accuracy"] = m.accuracy ? stat_json(*m.accuracy) : nlohmann::json();
        mj["rmse"] = m.rmse ? stat_json(*m.rmse) : nlohmann::json();
        nlohmann::json tk = nlohmann::json::array();
        for (std::size_t k = 0; k < m.topk.size(); ++k) {
            nlohmann::json e = stat_json(m.topk[k]);
            e["K"] = k + 1;
            tk.push_back(std::move(e));
        }
        mj["topk"] = std::move(tk);
        models.push_back(std::move(mj));
    }
    j["models"] = std::move(models);
    out << j.dump(1) << '\n';
}

void write_topk_csv(const BenchmarkReport& report, std::ostream& out) {
    out << "K,model,precision\n";
    for (std::size_t k = 1; k <= report.max_topk; ++k) {
        for (const auto& m : report.models) {
            if (m.topk.size() >= k) out << k << ',' << m.model << ',' << format_double(m.topk[k - 1].mean) << '\n';
        }
    }
}

std::vector<std::string> models_in(std::span<const PredictionRecord> records) {
    std::vector<std::string> out;
    for (const auto& r : records) {
        if (std::find(out.begin(), out.end(), r.model) == out.end()) out.push_back(r.model);
    }
    return out;
}

}  // namespace gbtpp
