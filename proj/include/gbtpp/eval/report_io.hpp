#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gbtpp/eval/benchmark.hpp"

namespace gbtpp {

/// sample_id,model,fold,true_node,pred_node,true_time,pred_time,true_rank
/// Absent values are empty fields; times use 17 significant digits.
void write_records_csv(std::span<const PredictionRecord> records, std::ostream& out);
[[nodiscard]] std::vector<PredictionRecord> read_records_csv(std::istream& in);

/// Report JSON: per model, per-fold accuracy / RMSE / top-K with mean and std.
void write_report_json(const BenchmarkReport& report, std::ostream& out);

/// K,model,precision (mean over folds), for the top-K curve.
void write_topk_csv(const BenchmarkReport& report, std::ostream& out);

/// Model names in order of first appearance in `records`.
[[nodiscard]] std::vector<std::string> models_in(std::span<const PredictionRecord> records);

}  // namespace gbtpp
