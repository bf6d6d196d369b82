#include "gbtpp/eval/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gbtpp/baselines/ctmc.hpp"
#include "gbtpp/baselines/markov.hpp"
#include "gbtpp/baselines/point_process.hpp"
#include "gbtpp/core/adjacency.hpp"
#include "gbtpp/core/kfold.hpp"
#include "gbtpp/core/samples.hpp"
#include "gbtpp/error.hpp"
#include "gbtpp/model/gbtpp.hpp"
#include "gbtpp/numerics/activations.hpp"
#include "gbtpp/numerics/rng.hpp"

namespace gbtpp {

const std::vector<std::string>& known_models() {
    static const std::vector<std::string> names{"mc1",    "mc2", "mc3",   "ctmc", "poisson",
                                                "hawkes", "scp", "rmtpp", "nrpp", "gbtpp"};
    return names;
}

void check_model_names(const std::vector<std::string>& names) {
    if (names.empty()) throw ValidationError("model list is empty");
    for (const auto& n : names) {
        if (std::find(known_models().begin(), known_models().end(), n) == known_models().end()) {
            throw ValidationError("unknown model '" + n + "'");
        }
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            if (names[i] == names[j]) throw ValidationError("model '" + names[i] + "' listed twice");
        }
    }
}

bool predicts_node(const std::string& m) { return m != "poisson" && m != "hawkes" && m != "scp"; }
bool predicts_time(const std::string& m) { return m.rfind("mc", 0) != 0; }

const ModelSummary& BenchmarkReport::model(const std::string& name) const {
    for (const auto& m : models) {
        if (m.model == name) return m;
    }
    throw ValidationError("report has no model '" + name + "'");
}

void assert_disjoint(const Provenance& prov, std::span<const std::size_t> held_out, const std::string& what) {
    std::vector<std::size_t> a = prov.cascades;
    std::vector<std::size_t> b(held_out.begin(), held_out.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::size_t> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    if (!both.empty()) {
        throw Error(what + " of fold " + std::to_string(prov.fold) + " was fit on held-out cascade " +
                    std::to_string(both.front()));
    }
}

namespace {

SummaryStat summarize(std::vector<double> values) {
    SummaryStat s;
    s.folds = std::move(values);
    const double n = static_cast<double>(s.folds.size());
    double sum = 0.0;
    for (double v : s.folds) sum += v;
    s.mean = sum / n;
    if (s.folds.size() > 1) {
        double ss = 0.0;
        for (double v : s.folds) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

}  // namespace

BenchmarkReport aggregate_records(std::span<const PredictionRecord> records, const std::vector<std::string>& models,
                                  std::size_t folds, std::size_t num_nodes, std::size_t max_topk,
                                  std::uint64_t seed) {
    BenchmarkReport rep;
    rep.folds = folds;
    rep.seed = seed;
    rep.num_nodes = num_nodes;
    rep.max_topk = std::min(max_topk, num_nodes);
    for (const auto& name : models) {
        std::vector<std::vector<PredictionRecord>> per_fold(folds);
        for (const auto& r : records) {
            if (r.model != name) continue;
            if (r.fold >= folds) throw ValidationError("record " + r.sample_id + " has fold out of range");
            per_fold[r.fold].push_back(r);
        }
        ModelSummary ms;
        ms.model = name;
        std::vector<double> acc, rmse;
        std::vector<std::vector<double>> topk(rep.max_topk);
        const bool has_ranks = std::all_of(records.begin(), records.end(), [&](const PredictionRecord& r) {
            return r.model != name || r.true_rank.has_value() || r.probabilities.has_value();
        });
        for (std::size_t f = 0; f < folds; ++f) {
            const auto& rs = per_fold[f];
            if (rs.empty()) throw ValidationError("model " + name + " has no records in fold " + std::to_string(f));
            if (predicts_node(name)) acc.push_back(node_accuracy(rs));
            if (predicts_time(name)) rmse.push_back(time_rmse(rs));
            if (predicts_node(name) && has_ranks) {
                for (std::size_t k = 1; k <= rep.max_topk; ++k) topk[k - 1].push_back(topk_precision(rs, k));
            }
        }
        if (!acc.empty()) ms.accuracy = summarize(std::move(acc));
        if (!rmse.empty()) ms.rmse = summarize(std::move(rmse));
        if (predicts_node(name) && has_ranks) {
            for (auto& v : topk) ms.topk.push_back(summarize(std::move(v)));
        }
        rep.models.push_back(std::move(ms));
    }
    return rep;
}

namespace {

std::string sample_id(const PropagationSample& s) {
    return s.cascade->seq_id + "#" + std::to_string(s.position);
}

PredictionRecord base_record(const PropagationSample& s, const std::string& model, std::size_t fold) {
    PredictionRecord r;
    r.sample_id = sample_id(s);
    r.model = model;
    r.fold = fold;
    r.true_node = s.label_node();
    r.true_time = s.label_time();
    return r;
}

struct FoldData {
    std::size_t fold = 0;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    CascadeDataset train;
    CascadeDataset test;
    std::vector<PropagationSample> train_samples;
    std::vector<PropagationSample> test_samples;
};

struct FoldEmbeddings {
    NodeEmbeddings embeddings;
    Provenance provenance;
};

FoldEmbeddings fit_fold_embeddings(const FoldData& fd, const BenchmarkConfig& cfg) {
    FoldEmbeddings out;
    const AdjacencyEstimate adj = estimate_adjacency(fd.train);
    Rng rng = Rng::substream(cfg.seed, 1'000 + fd.fold);
    out.embeddings = train_embeddings(adj, cfg.embed, rng).embeddings;
    out.provenance = {fd.fold, fd.train_idx};
    return out;
}

void run_model(const std::string& name, const FoldData& fd, const BenchmarkConfig& cfg,
               const std::optional<FoldEmbeddings>& fe, std::vector<PredictionRecord>& out) {
    const std::size_t V = fd.train.num_nodes;
    if (name == "mc1" || name == "mc2" || name == "mc3") {
        const std::size_t order = static_cast<std::size_t>(name[2] - '0');
        const MarkovModel m = fit_markov(fd.train_samples, V, order, cfg.markov_smoothing);
        for (const auto& s : fd.test_samples) {
            PredictionRecord r = base_record(s, name, fd.fold);
            Vector p = predict_markov(m, s.prefix());
            r.pred_node = static_cast<NodeId>(argmax(p));
            attach_distribution(r, std::move(p));
            out.push_back(std::move(r));
        }
    } else if (name == "ctmc") {
        const CtmcModel m = fit_ctmc(fd.train_samples, V);
        for (const auto& s : fd.test_samples) {
            PredictionRecord r = base_record(s, name, fd.fold);
            CtmcPrediction p = predict_ctmc(m, s.current_node(), s.current().time);
            r.pred_node = p.node;
            r.pred_time = p.time;
            attach_distribution(r, std::move(p.probabilities));
            out.push_back(std::move(r));
        }
    } else if (name == "poisson") {
        const PoissonModel m = fit_poisson(fd.train_samples);
        for (const auto& s : fd.test_samples) {
            PredictionRecord r = base_record(s, name, fd.fold);
            r.pred_time = predict_time_poisson(m, s.prefix());
            out.push_back(std::move(r));
        }
    } else if (name == "hawkes") {
        const HawkesModel m = fit_hawkes(fd.train.cascades);
        for (const auto& s : fd.test_samples) {
            PredictionRecord r = base_record(s, name, fd.fold);
            r.pred_time = predict_time_hawkes(m, s.prefix());
            out.push_back(std::move(r));
        }
    } else if (name == "scp") {
        const ScpModel m = fit_scp(fd.train.cascades);
        for (const auto& s : fd.test_samples) {
            PredictionRecord r = base_record(s, name, fd.fold);
            r.pred_time = predict_time_scp(m, s.prefix());
            out.push_back(std::move(r));
        }
    } else {
        const ModelKind kind = parse_model_kind(name);
        TrainConfig tc = cfg.train;
        tc.kind = kind;
        NodeEmbeddings emb;
        if (kind == ModelKind::rmtpp) {
            // Structurally unused: W_y, v_y and U_h stay zero.
            emb = NodeEmbeddings::zeros(V, cfg.embed.dim);
        } else {
            if (!fe) throw Error("embeddings missing");
            assert_disjoint(fe->provenance, fd.test_idx, "embedding");
            emb = fe->embeddings;
        }
        Rng rng = Rng::substream(mix_seed(cfg.seed ^ 0x9e3779b97f4a7c15ULL), fd.fold * 8 + static_cast<std::size_t>(kind));
        const TrainResult tr = train(fd.train, emb, tc, rng);
        for (const auto& s : fd.test_samples) {
            PredictionRecord r = base_record(s, name, fd.fold);
            NodeTimePrediction p = predict_next(tr.model, emb, s.prefix());
            r.pred_node = p.node;
            r.pred_time = p.time;
            attach_distribution(r, std::move(p.probabilities));
            out.push_back(std::move(r));
        }
    }
}

}  // namespace

BenchmarkResult run_benchmark(const CascadeDataset& ds, const BenchmarkConfig& cfg) {
    check_model_names(cfg.models);
    validate(ds);
    const FoldAssignment folds = kfold_split(ds, cfg.folds, cfg.seed);
    const bool needs_embeddings = std::any_of(cfg.models.begin(), cfg.models.end(),
                                              [](const std::string& m) { return m == "gbtpp" || m == "nrpp"; });
    BenchmarkResult res;
    for (std::size_t f = 0; f < cfg.folds; ++f) {
        FoldData fd;
        fd.fold = f;
        fd.train_idx = folds.train_indices(f);
        fd.test_idx = folds.test_indices(f);
        fd.train = ds.subset(fd.train_idx);
        fd.test = ds.subset(fd.test_idx);
        fd.train_samples = make_samples(fd.train);
        fd.test_samples = make_samples(fd.test);

        std::optional<FoldEmbeddings> fe;
        if (needs_embeddings) {
            if (cfg.log) cfg.log("fold " + std::to_string(f) + ": embeddings");
            try {
                fe = fit_fold_embeddings(fd, cfg);
            } catch (const std::exception& e) {
                throw Error("fold " + std::to_string(f) + ", embeddings: " + e.what());
            }
        }
        for (const auto& name : cfg.models) {
            if (cfg.log) cfg.log("fold " + std::to_string(f) + ": " + name);
            try {
                run_model(name, fd, cfg, fe, res.records);
            } catch (const std::exception& e) {
                throw Error("fold " + std::to_string(f) + ", model " + name + ": " + e.what());
            }
        }
    }
    res.report = aggregate_records(res.records, cfg.models, cfg.folds, ds.num_nodes, cfg.max_topk, cfg.seed);
    return res;
}

}  // namespace gbtpp
