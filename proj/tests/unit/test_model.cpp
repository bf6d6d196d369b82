#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gbtpp/baselines/variants.hpp"
#include "gbtpp/core/samples.hpp"
#include "gbtpp/error.hpp"
#include "gbtpp/model/bptt.hpp"
#include "gbtpp/model/checkpoint.hpp"
#include "gbtpp/model/gbtpp.hpp"
#include "gbtpp/model/time_density.hpp"
#include "gbtpp/model/train.hpp"
#include "gbtpp/numerics/finite_diff.hpp"
#include "gbtpp/numerics/quadrature.hpp"
#include "oracles.hpp"

using namespace gbtpp;

namespace {

GbtppModel random_model(const ModelDims& dims, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    GbtppModel m;
    m.params = init_params(dims, rng);
    for (double& x : m.params.flat()) x += rng.uniform(-0.3, 0.3);
    m.params.w_t() = 0.2;
    m.time_scale = scale;
    return m;
}

CascadeDataset smoke_dataset(std::size_t v, std::size_t n, std::uint64_t seed) {
    CascadeDataset ds;
    ds.num_nodes = v;
    for (std::size_t i = 0; i < n; ++i) {
        // Deterministic ring walk with noise-free gaps: easy to learn.
        Cascade c;
        c.seq_id = "s" + std::to_string(i);
        Rng rng(seed + i);
        NodeId node = static_cast<NodeId>(rng.below(v));
        double t = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            c.events.push_back({node, t});
            node = static_cast<NodeId>((node + 1) % v);
            t += 0.5 + rng.exponential(2.0);
        }
        ds.cascades.push_back(c);
    }
    return ds;
}

}  // namespace

TEST_CASE("init params") {
    ModelDims dims{10, 4, 8, 6};
    Rng a(3), b(3);
    auto p = init_params(dims, a);
    CHECK(p == init_params(dims, b));
    CHECK(p.shape(Field::W_em) == std::pair<std::size_t, std::size_t>{10, 6});
    CHECK(p.shape(Field::W_v) == std::pair<std::size_t, std::size_t>{6, 8});
    CHECK(p.shape(Field::W_y) == std::pair<std::size_t, std::size_t>{8, 8});
    CHECK(p.shape(Field::W_h) == std::pair<std::size_t, std::size_t>{8, 8});
    CHECK(p.shape(Field::V_h) == std::pair<std::size_t, std::size_t>{10, 8});
    CHECK(p.shape(Field::U_h) == std::pair<std::size_t, std::size_t>{10, 8});
    CHECK(p.field(Field::v_y).size() == 8);
    CHECK(p.w_t() == 0.1);
    CHECK(p.b_t() == 0.0);
    for (double x : p.field(Field::b_out)) CHECK(x == 0.0);
    const double bound = 1.0 / std::sqrt(8.0);
    for (double x : p.field(Field::W_h)) CHECK(std::abs(x) <= bound);
    std::size_t total = 0;
    for (Field f : all_fields()) total += p.field(f).size();
    CHECK(total == p.size());
}

TEST_CASE("model kind masks") {
    CHECK(parse_model_kind("rmtpp") == ModelKind::rmtpp);
    CHECK_THROWS_AS(parse_model_kind("lstm"), ValidationError);
    CHECK(field_masked(ModelKind::rmtpp, Field::W_y));
    CHECK(field_masked(ModelKind::rmtpp, Field::v_y));
    CHECK(field_masked(ModelKind::nrpp, Field::U_h));
    CHECK_FALSE(field_masked(ModelKind::nrpp, Field::W_y));
    CHECK_FALSE(field_masked(ModelKind::gbtpp, Field::U_h));
    Rng rng(1);
    auto p = init_params({4, 2, 3, 3}, rng);
    apply_mask(ModelKind::rmtpp, p);
    for (double x : p.field(Field::U_h)) CHECK(x == 0.0);
    for (double x : p.field(Field::W_y)) CHECK(x == 0.0);
}

TEST_CASE("time feature") {
    std::vector<Event> ev{{0, 1.0}, {1, 2.5}, {0, 2.5 + std::exp(1.0) - 1.0}};
    CHECK(time_feature(ev, 0, TimeFeature::raw_gap) == 0.0);
    CHECK(time_feature(ev, 1, TimeFeature::raw_gap) == 1.5);
    CHECK(time_feature(ev, 1, TimeFeature::raw_gap, 3.0) == 0.5);
    CHECK(time_feature(ev, 2, TimeFeature::log_gap) == doctest::Approx(1.0));
    std::vector<Event> bad{{0, 2.0}, {1, 1.0}};
    CHECK_THROWS_AS(time_feature(bad, 1, TimeFeature::raw_gap), ValidationError);
    CHECK(parse_time_feature("log_gap") == TimeFeature::log_gap);
}

TEST_CASE("step history") {
    ModelDims dims{3, 2, 4, 3};
    GbtppParams zero(dims);
    Vector y{0.3, -1.0, 2.0, 0.5};
    auto h = step_history(zero, Vector{1, 2, 3, 4}, 1, 0.7, y);
    for (double x : h) CHECK(x == 0.0);

    GbtppParams bias(dims);
    bias.b_h()[0] = 1.0;
    bias.b_h()[1] = -1.0;
    auto hb = step_history(bias, Vector(4, 0.0), 2, 0.0, Vector(4, 0.0));
    CHECK(hb == Vector{1.0, 0.0, 0.0, 0.0});

    for (std::uint64_t s = 0; s < 5; ++s) {
        auto m = random_model(dims, s);
        Rng rng(s + 50);
        Vector hp(4), yy(4);
        for (double& x : hp) x = rng.uniform(0, 1);
        for (double& x : yy) x = rng.uniform(-1, 1);
        auto got = step_history(m.params, hp, NodeId(s % 3), 0.4, yy);
        auto want = oracle::step(m.params, hp, NodeId(s % 3), 0.4, yy);
        for (std::size_t i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }

    GbtppParams huge(dims);
    huge.b_h()[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(step_history(huge, Vector(4, 0.0), 0, 0.0, Vector(4, 0.0)), NumericalError);
}

TEST_CASE("graph bias") {
    ModelDims dims{3, 1, 2, 2};
    GbtppParams p(dims);
    Vector h{1.0, 1.0};
    NodeEmbeddings zero(3, 1);

    p.U_h()[2 * 1 + 0] = -1.0;
    for (double b : graph_bias(p, h, zero, 1)) CHECK(b == 0.0);

    p.U_h()[2 * 1 + 0] = 1.5;
    p.U_h()[2 * 1 + 1] = 0.5;
    for (double b : graph_bias(p, h, zero, 1)) CHECK(b == 1.0);

    NodeEmbeddings e(3, 1);
    e.source(1, 0) = 1.0;
    e.target(2, 0) = std::log(9.0);
    auto bias = graph_bias(p, h, e, 1);
    CHECK(bias[2] == doctest::Approx(1.8));
    CHECK(bias[0] == doctest::Approx(1.0));

    for (std::uint64_t s = 0; s < 4; ++s) {
        auto m = random_model({5, 2, 3, 3}, s);
        auto emb = oracle::random_embeddings(5, 2, 1.0, s);
        Vector hh{0.5, 0.1, 0.9};
        auto got = node_logits(m.params, hh, emb, NodeId(s));
        auto want = oracle::logits(m.params, hh, emb, NodeId(s));
        for (std::size_t k = 0; k < 5; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
    }
}

TEST_CASE("node distribution") {
    ModelDims dims{3, 1, 2, 2};
    GbtppParams p(dims);
    NodeEmbeddings zero(3, 1);
    Vector h{0.3, 0.0};
    for (double x : node_distribution(p, h, zero, 0)) CHECK(x == doctest::Approx(1.0 / 3.0));
    p.b_out()[0] = std::log(2.0);
    auto d = node_distribution(p, h, zero, 0);
    CHECK(d[0] == doctest::Approx(0.5));
    CHECK(d[1] == doctest::Approx(0.25));
    CHECK(d[2] == doctest::Approx(0.25));
    for (std::size_t k = 0; k < 3; ++k) p.b_out()[k] += 17.0;
    auto shifted = node_distribution(p, h, zero, 0);
    for (std::size_t k = 0; k < 3; ++k) CHECK(shifted[k] == doctest::Approx(d[k]).epsilon(1e-12));

    auto m = random_model({7, 2, 4, 3}, 2);
    auto emb = oracle::random_embeddings(7, 2, 2.0, 2);
    double sum = 0.0;
    for (double x : node_distribution(m.params, Vector{1, 2, 0, 1}, emb, 3)) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("intensity and density") {
    ModelDims dims{2, 1, 2, 2};
    GbtppParams p(dims);
    p.w_t() = 0.0;
    Vector h{0.0, 0.0}, y{0.0, 0.0};
    CHECK(intensity(p, h, y, 5.0, 1.0) == 1.0);
    p.b_t() = std::log(3.0);
    CHECK(intensity(p, h, y, 9.0, 1.0) == doctest::Approx(3.0));
    p.b_t() = 0.0;
    p.w_t() = 1.0;
    CHECK(intensity(p, h, y, 3.0, 1.0) == doctest::Approx(std::exp(2.0)));

    p.w_t() = 1e-12;
    p.b_t() = std::log(2.0);
    CHECK(time_density(p, h, y, 1.7, 1.0) == doctest::Approx(2.0 * std::exp(-1.4)));
    p.w_t() = 0.3;
    CHECK(time_density(p, h, y, 1.0, 1.0) == doctest::Approx(intensity(p, h, y, 1.0, 1.0)));

    p.b_t() = 800.0;
    CHECK_THROWS_AS(intensity(p, h, y, 1.0, 1.0), NumericalError);
}

TEST_CASE("density normalizes and matches the closed form") {
    Rng rng(4);
    for (int k = 0; k < 30; ++k) {
        const double c = rng.uniform(-5, 5);
        const double w = rng.uniform(0, 3);
        CHECK(density_mass(c, w) == doctest::Approx(1.0).epsilon(1e-6));
        const double d = rng.uniform(0, 2);
        CHECK(time_nll(c, w, d).value == doctest::Approx(oracle::time_nll(c, w, d)).epsilon(1e-10));
        CHECK(std::exp(log_time_density(c, w, d)) == doctest::Approx(time_density(c, w, d)));
    }
    CHECK(expected_elapsed(std::log(2.0), 0.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK_THROWS_AS(survival_cutoff(0.0, -5.0), NumericalError);
}

TEST_CASE("time nll derivatives") {
    Rng rng(6);
    for (int k = 0; k < 20; ++k) {
        const double c = rng.uniform(-3, 3);
        const double w = k < 5 ? rng.uniform(-1e-6, 1e-6) : rng.uniform(-1, 2);
        const double d = rng.uniform(0.01, 2);
        auto t = time_nll(c, w, d);
        Vector x{c, w};
        auto fd = finite_diff_grad([&](std::span<const double> q) { return time_nll(q[0], q[1], d).value; }, x);
        CHECK(t.d_c == doctest::Approx(fd[0]).epsilon(1e-6));
        CHECK(t.d_w == doctest::Approx(fd[1]).epsilon(1e-5));
    }
}

TEST_CASE("sequence log likelihood") {
    ModelDims one{1, 1, 2, 2};
    GbtppModel m;
    m.params = random_model(one, 3).params;
    NodeEmbeddings e1(1, 1);
    Cascade c{"a", {{0, 0.0}, {0, 1.0}, {0, 1.5}}};
    for (const auto& s : sample_log_likelihoods(m, e1, c)) CHECK(s.node == doctest::Approx(0.0));

    GbtppModel z;
    z.params = GbtppParams({4, 1, 2, 2});
    NodeEmbeddings e4(4, 1);
    Cascade two{"b", {{1, 0.0}, {2, 2.0}}};
    auto ll = sample_log_likelihoods(z, e4, two);
    REQUIRE(ll.size() == 1);
    CHECK(ll[0].node == doctest::Approx(-std::log(4.0)));
    CHECK(ll[0].time == doctest::Approx(-2.0));

    auto m5 = random_model({5, 2, 3, 3}, 9, 2.0);
    m5.time_weight = 0.7;
    auto emb = oracle::random_embeddings(5, 2, 1.0, 9);
    auto cas = oracle::random_cascade(5, 7, 9);
    double sum = 0.0;
    for (const auto& s : sample_log_likelihoods(m5, emb, cas)) sum += s.node + 0.7 * s.time;
    CHECK(sequence_log_likelihood(m5, emb, cas) == doctest::Approx(sum));
    CHECK(-sequence_log_likelihood(m5, emb, cas) ==
          doctest::Approx(oracle::window_loss(m5, emb, cas, 0, 6, Vector(3, 0.0))).epsilon(1e-10));
}

TEST_CASE("bptt gradient matches finite differences of the oracle loss") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ModelDims dims{6, 3, 5, 4};
        auto m = random_model(dims, seed, 1.3);
        m.time_weight = 0.8;
        auto emb = oracle::random_embeddings(6, 3, 1.0, seed);
        auto c = oracle::random_cascade(6, 6, seed);
        Vector h_in(5);
        Rng rng(seed + 7);
        for (double& x : h_in) x = rng.uniform(0, 1);
        BpttWindow w{&c, 1, 3, h_in};
        auto res = bptt_gradients(m, emb, w);
        CHECK(res.loss == doctest::Approx(oracle::window_loss(m, emb, c, 1, 3, h_in)).epsilon(1e-10));
        CHECK(res.loss == doctest::Approx(window_loss(m, emb, w)).epsilon(1e-12));

        Vector x(m.params.flat().begin(), m.params.flat().end());
        auto f = [&](std::span<const double> q) {
            GbtppModel mm = m;
            std::copy(q.begin(), q.end(), mm.params.flat().begin());
            return oracle::window_loss(mm, emb, c, 1, 3, h_in);
        };
        auto fd = finite_diff_grad(f, x, 1e-5);
        std::size_t bad = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double g = res.grad.flat()[k];
            if (std::max(std::abs(g), std::abs(fd[k])) > 1e-6 && relative_error(g, fd[k]) > 1e-4) ++bad;
        }
        CHECK(bad == 0);
        REQUIRE(res.h_next.size() == 5);
    }
}

TEST_CASE("bptt structural properties") {
    ModelDims dims{4, 2, 3, 3};
    auto m = random_model(dims, 11);
    auto emb = oracle::random_embeddings(4, 2, 1.0, 11);
    auto c = oracle::random_cascade(4, 5, 11);

    auto single = bptt_gradients(m, emb, BpttWindow{&c, 0, 1, Vector(3, 0.0)});
    for (double g : single.grad.field(Field::W_h)) CHECK(g == 0.0);

    Cascade doubled = c;
    auto r1 = bptt_gradients(m, emb, BpttWindow{&c, 0, 4, Vector(3, 0.0)});
    GbtppModel m2 = m;
    m2.time_weight = 1.0;
    // Summing the window twice equals doubling every gradient entry.
    auto a = bptt_gradients(m2, emb, BpttWindow{&c, 0, 2, Vector(3, 0.0)});
    auto b = bptt_gradients(m2, emb, BpttWindow{&doubled, 0, 2, Vector(3, 0.0)});
    for (std::size_t k = 0; k < a.grad.size(); ++k) CHECK(a.grad.flat()[k] + b.grad.flat()[k] == 2.0 * a.grad.flat()[k]);
    CHECK(r1.h_next.empty());

    GbtppModel rm = m;
    rm.kind = ModelKind::rmtpp;
    apply_mask(rm.kind, rm.params);
    auto rg = bptt_gradients(rm, emb, BpttWindow{&c, 0, 4, Vector(3, 0.0)});
    for (Field f : {Field::U_h, Field::W_y, Field::v_y})
        for (double g : rg.grad.field(f)) CHECK(g == 0.0);

    auto windows = make_windows(oracle::random_cascade(4, 12, 1), 5);
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].count == 5);
    CHECK(windows[2].first == 10);
    CHECK(windows[2].count == 1);
}

TEST_CASE("training") {
    auto ds = smoke_dataset(5, 30, 1);
    auto emb = oracle::random_embeddings(5, 2, 0.5, 1);
    TrainConfig cfg;
    cfg.hidden = 6;
    cfg.input_dim = 4;
    cfg.epochs = 3;
    cfg.learning_rate = 0.05;
    cfg.seed = 4;
    auto r = train(ds, emb, cfg);
    REQUIRE(r.loss_trace.size() == 4);
    CHECK(r.loss_trace[1] < r.loss_trace[0]);
    CHECK(r.model.time_scale == doctest::Approx(mean_gap(ds)));
    CHECK(r.model.params == train(ds, emb, cfg).model.params);

    cfg.epochs = 0;
    Rng rng(cfg.seed);
    auto init = init_model(ds, emb, cfg, rng);
    CHECK(train(ds, emb, cfg).model.params == init.params);

    cfg.epochs = 2;
    cfg.kind = ModelKind::nrpp;
    auto nr = train(ds, emb, cfg);
    for (double x : nr.model.params.field(Field::U_h)) CHECK(x == 0.0);

    cfg.kind = ModelKind::gbtpp;
    cfg.learning_rate = 1e6;
    cfg.grad_clip = 1e12;
    CHECK_THROWS_WITH_AS(train(ds, emb, cfg), doctest::Contains("lower learning_rate"), NumericalError);

    NodeEmbeddings wrong(4, 2);
    cfg.learning_rate = 0.01;
    CHECK_THROWS_AS(train(ds, wrong, cfg), ValidationError);
}

TEST_CASE("predict next") {
    ModelDims dims{3, 1, 2, 2};
    GbtppModel m;
    m.params = GbtppParams(dims);
    m.params.w_t() = 0.0;
    m.params.b_t() = std::log(2.0);
    NodeEmbeddings zero(3, 1);
    std::vector<Event> prefix{{1, 0.0}};
    auto p = predict_next(m, zero, prefix);
    CHECK(p.time == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(p.node == 0);

    m.params.b_out()[0] = 1.0;
    m.params.b_out()[2] = 1.0;
    CHECK(predict_next(m, zero, prefix).node == 0);
    m.params.b_out()[1] = std::log(0.5 / 0.2) + 0.0;
    m.params.b_out()[0] = 0.0;
    m.params.b_out()[2] = std::log(0.3 / 0.2);
    auto q = predict_next(m, zero, prefix);
    CHECK(q.node == 1);
    CHECK(q.probabilities[1] == doctest::Approx(0.5));

    m.time_scale = 4.0;
    std::vector<Event> later{{0, 1.0}, {1, 3.0}};
    CHECK(predict_next(m, zero, later).time == doctest::Approx(3.0 + 4.0 * 0.5).epsilon(1e-8));
    CHECK_THROWS(predict_next(m, zero, std::vector<Event>{}));
}

TEST_CASE("checkpoint round trip") {
    Checkpoint ck;
    ck.model = random_model({4, 2, 3, 5}, 21, 0.37);
    ck.model.kind = ModelKind::nrpp;
    ck.model.time_feature = TimeFeature::log_gap;
    ck.model.time_weight = 0.25;
    ck.model.params.flat()[3] = 1.0 / 3.0;
    ck.embeddings_path = "emb.csv";
    ck.config = train_config_to_json(TrainConfig{});
    const auto path = std::filesystem::temp_directory_path() / "gbtpp_ck_test.json";
    save_checkpoint(ck, path);
    auto back = load_checkpoint(path);
    CHECK(back.model.params == ck.model.params);
    CHECK(back.model.kind == ModelKind::nrpp);
    CHECK(back.model.time_feature == TimeFeature::log_gap);
    CHECK(back.model.time_scale == 0.37);
    CHECK(back.model.time_weight == 0.25);
    CHECK(back.embeddings_path == "emb.csv");
    std::filesystem::remove(path);
}

TEST_CASE("rmtpp variant matches the masked model") {
    TrainConfig cfg;
    auto r = rmtpp_variant(cfg);
    CHECK(r.kind == ModelKind::rmtpp);
    CHECK(nrpp_variant(cfg).kind == ModelKind::nrpp);

    auto m = random_model({5, 2, 3, 3}, 5);
    apply_mask(ModelKind::rmtpp, m.params);
    auto emb = oracle::random_embeddings(5, 2, 1.0, 5);
    NodeEmbeddings zero(5, 2);
    Vector h{0.2, 0.4, 0.0};
    CHECK(node_logits(m.params, h, emb, 2) == node_logits(m.params, h, zero, 2));
}
