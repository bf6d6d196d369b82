#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gbtpp/error.hpp"
#include "gbtpp/eval/benchmark.hpp"
#include "gbtpp/eval/metrics.hpp"
#include "gbtpp/eval/report_io.hpp"

using namespace gbtpp;

namespace {

PredictionRecord rec(NodeId truth, std::optional<NodeId> pred, double t = 0.0, std::optional<double> pt = {}) {
    PredictionRecord r;
    r.sample_id = "x";
    r.model = "m";
    r.true_node = truth;
    r.pred_node = pred;
    r.true_time = t;
    r.pred_time = pt;
    return r;
}

BenchmarkConfig tiny_config() {
    BenchmarkConfig cfg;
    cfg.embed.dim = 2;
    cfg.embed.epochs = 5;
    cfg.train.hidden = 3;
    cfg.train.input_dim = 2;
    cfg.train.epochs = 1;
    cfg.max_topk = 3;
    return cfg;
}

// After node 2 the next node is decided by the node before it.
CascadeDataset second_order_dataset(std::size_t n) {
    CascadeDataset ds;
    ds.num_nodes = 5;
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId a = NodeId(i % 2);
        ds.cascades.push_back({"c" + std::to_string(i), {{a, 0.0}, {2, 1.0}, {NodeId(3 + a), 2.0}}});
    }
    return ds;
}

}  // namespace

TEST_CASE("accuracy") {
    std::vector<PredictionRecord> all{rec(1, 1), rec(2, 2)};
    CHECK(node_accuracy(all) == 1.0);
    std::vector<PredictionRecord> none{rec(1, 0), rec(2, 0)};
    CHECK(node_accuracy(none) == 0.0);
    std::vector<PredictionRecord> three{rec(1, 1), rec(2, 2), rec(0, 0), rec(3, 1)};
    CHECK(node_accuracy(three) == 0.75);
    std::vector<PredictionRecord> empty;
    CHECK_THROWS_AS(node_accuracy(empty), ValidationError);
    std::vector<PredictionRecord> time_only{rec(1, std::nullopt, 1.0, 2.0)};
    CHECK_THROWS_AS(node_accuracy(time_only), ValidationError);
}

TEST_CASE("rmse") {
    std::vector<PredictionRecord> perfect{rec(0, {}, 1.0, 1.0), rec(0, {}, 2.0, 2.0)};
    CHECK(time_rmse(perfect) == 0.0);
    std::vector<PredictionRecord> r{rec(0, {}, 1.0, 4.0), rec(0, {}, 2.0, 6.0)};
    CHECK(time_rmse(r) == doctest::Approx(std::sqrt(12.5)));
    CHECK(time_rmse(r) >= 3.5);
    std::vector<PredictionRecord> empty;
    CHECK_THROWS_AS(time_rmse(empty), ValidationError);
}

TEST_CASE("rank and top-k") {
    CHECK(rank_of(std::vector<double>{0.2, 0.5, 0.3}, 1) == 0);
    CHECK(rank_of(std::vector<double>{0.2, 0.5, 0.3}, 0) == 2);
    CHECK(rank_of(std::vector<double>{0.4, 0.2, 0.4}, 2) == 1);
    CHECK(rank_of(std::vector<double>{0.4, 0.2, 0.4}, 0) == 0);

    std::vector<PredictionRecord> toy{rec(0, 0), rec(1, 0), rec(2, 0)};
    attach_distribution(toy[0], {0.6, 0.3, 0.1});
    attach_distribution(toy[1], {0.6, 0.3, 0.1});
    attach_distribution(toy[2], {0.6, 0.3, 0.1});
    CHECK(topk_precision(toy, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(topk_precision(toy, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(topk_precision(toy, 3) == 1.0);
    CHECK(topk_precision(toy, 1) == node_accuracy(toy));
    CHECK_THROWS(topk_precision(toy, 0));

    PredictionRecord bad = rec(0, 0);
    CHECK_THROWS(attach_distribution(bad, {0.5, 0.4}));
    std::vector<PredictionRecord> missing{rec(0, 0)};
    CHECK_THROWS(topk_precision(missing, 1));
}

TEST_CASE("provenance") {
    Provenance p{0, {1, 2, 3}};
    std::vector<std::size_t> ok{0, 4};
    std::vector<std::size_t> leak{0, 3};
    CHECK_NOTHROW(assert_disjoint(p, ok, "embeddings"));
    CHECK_THROWS_WITH(assert_disjoint(p, leak, "embeddings"), doctest::Contains("embeddings"));
}

TEST_CASE("model names") {
    CHECK(known_models().size() == 10);
    CHECK_NOTHROW(check_model_names({"mc1", "gbtpp"}));
    CHECK_THROWS_WITH(check_model_names({"mc1", "lstm"}), doctest::Contains("lstm"));
    CHECK(predicts_node("ctmc"));
    CHECK(predicts_time("ctmc"));
    CHECK_FALSE(predicts_node("hawkes"));
    CHECK_FALSE(predicts_time("mc2"));
}

TEST_CASE("two folds on four cascades") {
    CascadeDataset ds;
    ds.num_nodes = 3;
    ds.cascades = {{"a", {{0, 0.0}, {1, 1.0}, {2, 1.5}}},
                   {"b", {{1, 0.0}, {2, 2.0}, {0, 2.5}}},
                   {"c", {{2, 0.0}, {0, 0.5}}},
                   {"d", {{0, 0.0}, {2, 1.0}, {1, 3.0}}}};
    auto cfg = tiny_config();
    cfg.folds = 2;
    std::vector<std::string> log;
    cfg.log = [&](const std::string& s) { log.push_back(s); };
    auto r = run_benchmark(ds, cfg);
    CHECK(r.report.folds == 2);
    CHECK(r.report.models.size() == 10);
    // Every model predicts every held-out sample exactly once.
    std::size_t samples = 0;
    for (const auto& c : ds.cascades) samples += c.size() - 1;
    for (const auto& m : cfg.models) {
        std::size_t n = 0;
        for (const auto& rec : r.records) n += rec.model == m;
        CHECK(n == samples);
    }
    const auto& mc = r.report.model("mc1");
    REQUIRE(mc.accuracy);
    CHECK(mc.accuracy->folds.size() == 2);
    CHECK(mc.accuracy->mean == doctest::Approx((mc.accuracy->folds[0] + mc.accuracy->folds[1]) / 2));
    const double d = mc.accuracy->folds[0] - mc.accuracy->folds[1];
    CHECK(mc.accuracy->std == doctest::Approx(std::abs(d) / std::sqrt(2.0)));
    CHECK_FALSE(r.report.model("poisson").accuracy);
    CHECK(r.report.model("poisson").rmse);
    CHECK_FALSE(r.report.model("mc2").rmse);

    // Same seed, same records.
    auto again = run_benchmark(ds, cfg);
    std::ostringstream a, b;
    write_records_csv(r.records, a);
    write_records_csv(again.records, b);
    CHECK(a.str() == b.str());

    // Report regeneration from the CSV is exact.
    std::istringstream in(a.str());
    auto reloaded = read_records_csv(in);
    auto regen = aggregate_records(reloaded, models_in(reloaded), 2, 3, cfg.max_topk, cfg.seed);
    std::ostringstream j1, j2;
    write_report_json(r.report, j1);
    write_report_json(regen, j2);
    CHECK(j1.str() == j2.str());

    for (const auto& m : r.report.models) {
        for (std::size_t k = 1; k < m.topk.size(); ++k) CHECK(m.topk[k].mean >= m.topk[k - 1].mean);
        if (!m.topk.empty()) {
            CHECK(m.topk[0].folds == m.accuracy->folds);
            CHECK(m.topk.back().mean == 1.0);
        }
    }

    cfg.folds = 5;
    CHECK_THROWS(run_benchmark(ds, cfg));
}

TEST_CASE("failures name the fold and model") {
    CascadeDataset ds;
    ds.num_nodes = 2;
    for (int i = 0; i < 4; ++i) ds.cascades.push_back({std::to_string(i), {{0, 0.0}, {1, 1.0}}});
    auto cfg = tiny_config();
    cfg.folds = 2;
    cfg.models = {"gbtpp"};
    cfg.train.learning_rate = -1.0;
    CHECK_THROWS_WITH(run_benchmark(ds, cfg), doctest::Contains("model gbtpp"));
}

TEST_CASE("gbtpp beats a first-order chain on second-order structure") {
    auto ds = second_order_dataset(40);
    auto cfg = tiny_config();
    cfg.models = {"mc1", "gbtpp"};
    cfg.folds = 4;
    cfg.train.hidden = 8;
    cfg.train.input_dim = 4;
    cfg.train.epochs = 60;
    cfg.train.learning_rate = 0.1;
    auto r = run_benchmark(ds, cfg);
    CHECK(r.report.model("gbtpp").accuracy->mean > r.report.model("mc1").accuracy->mean);
}

TEST_CASE("top-k csv") {
    BenchmarkReport rep;
    rep.max_topk = 2;
    ModelSummary m;
    m.model = "ctmc";
    m.topk = {SummaryStat{{0.5}, 0.5, 0.0}, SummaryStat{{0.75}, 0.75, 0.0}};
    rep.models.push_back(m);
    std::ostringstream out;
    write_topk_csv(rep, out);
    CHECK(out.str().rfind("K,model,precision\n", 0) == 0);
    CHECK(out.str().find("2,ctmc,0.75") != std::string::npos);
}
