#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/embed/embeddings.hpp"
#include "gbtpp/eval/metrics.hpp"
#include "gbtpp/model/train.hpp"

namespace gbtpp {

/// Model roster names: mc1 mc2 mc3 ctmc poisson hawkes scp rmtpp nrpp gbtpp.
[[nodiscard]] const std::vector<std::string>& known_models();
/// Throws ValidationError naming the first unknown entry.
void check_model_names(const std::vector<std::string>& names);
/// Node-prediction, time-prediction and probabilistic capabilities of a model.
[[nodiscard]] bool predicts_node(const std::string& model);
[[nodiscard]] bool predicts_time(const std::string& model);

struct BenchmarkConfig {
    std::vector<std::string> models{"mc1", "mc2", "mc3", "ctmc", "poisson", "hawkes", "scp", "rmtpp", "nrpp", "gbtpp"};
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    std::size_t max_topk = 5;
    double markov_smoothing = 0.1;
    EmbedConfig embed;
    TrainConfig train;
    /// Called with a progress line (fold/model); may be empty.
    std::function<void(const std::string&)> log;
};

struct SummaryStat {
    std::vector<double> folds;
    double mean = 0.0;
    double std = 0.0;  // over folds, n - 1 denominator
};

struct ModelSummary {
    std::string model;
    std::optional<SummaryStat> accuracy;
    std::optional<SummaryStat> rmse;
    /// topk[K-1] for K = 1..max_topk (probabilistic models only).
    std::vector<SummaryStat> topk;
};

struct BenchmarkReport {
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    std::size_t num_nodes = 0;
    std::size_t max_topk = 0;
    std::vector<ModelSummary> models;

    [[nodiscard]] const ModelSummary& model(const std::string& name) const;
};

struct BenchmarkResult {
    BenchmarkReport report;
    std::vector<PredictionRecord> records;
};

/// Cascade indices an artefact (embeddings, adjacency) was fit on; carried
/// with it through the pipeline.
struct Provenance {
    std::size_t fold = 0;
    std::vector<std::size_t> cascades;
};

/// Throws Error if any held-out cascade is among those `prov` was fit on.
void assert_disjoint(const Provenance& prov, std::span<const std::size_t> held_out, const std::string& what);

/// Per-fold and aggregate metrics from records alone. Running this on records
/// reloaded from CSV reproduces the benchmark's report exactly.
[[nodiscard]] BenchmarkReport aggregate_records(std::span<const PredictionRecord> records,
                                                const std::vector<std::string>& models, std::size_t folds,
                                                std::size_t num_nodes, std::size_t max_topk, std::uint64_t seed);

/// k-fold cross-validation at cascade granularity. For each fold every model
/// is fit on the other folds (embeddings and adjacency included) and predicts
/// every held-out sample. Failures are rethrown naming the fold and model.
[[nodiscard]] BenchmarkResult run_benchmark(const CascadeDataset& ds, const BenchmarkConfig& cfg);

}  // namespace gbtpp
