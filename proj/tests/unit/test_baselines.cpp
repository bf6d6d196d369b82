#include <doctest.h>

#include <cmath>

#include "gbtpp/baselines/ctmc.hpp"
#include "gbtpp/baselines/markov.hpp"
#include "gbtpp/baselines/point_process.hpp"
#include "gbtpp/baselines/serialize.hpp"
#include "gbtpp/core/samples.hpp"
#include "gbtpp/error.hpp"
#include "gbtpp/numerics/rng.hpp"

using namespace gbtpp;

namespace {

CascadeDataset from_paths(std::size_t v, const std::vector<std::vector<NodeId>>& paths, double gap = 1.0) {
    CascadeDataset ds;
    ds.num_nodes = v;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        Cascade c;
        c.seq_id = std::to_string(i);
        for (std::size_t k = 0; k < paths[i].size(); ++k) c.events.push_back({paths[i][k], gap * double(k)});
        ds.cascades.push_back(c);
    }
    return ds;
}

std::vector<Event> prefix_of(std::vector<NodeId> nodes) {
    std::vector<Event> ev;
    for (std::size_t k = 0; k < nodes.size(); ++k) ev.push_back({nodes[k], double(k)});
    return ev;
}

double sum(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

TEST_CASE("markov cycle") {
    auto ds = from_paths(3, {{0, 1, 2, 0, 1, 2, 0}, {1, 2, 0, 1}});
    auto samples = make_samples(ds);
    auto m = fit_markov(samples, 3, 1, 0.0);
    auto p = predict_markov(m, prefix_of({2, 0}));
    CHECK(p[1] == 1.0);
    CHECK(predict_markov(m, prefix_of({0, 1}))[2] == 1.0);
    auto s = fit_markov(samples, 3, 1);
    CHECK(sum(predict_markov(s, prefix_of({1}))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(fit_markov(samples, 3, 4), ValidationError);
}

TEST_CASE("markov backoff") {
    auto ds = from_paths(4, {{0, 1, 2, 3}, {3, 1, 2, 0}, {2, 1, 2, 1}});
    auto samples = make_samples(ds);
    auto m3 = fit_markov(samples, 4, 3);
    auto m2 = fit_markov(samples, 4, 2);
    // (3,0,1) was never seen; its suffix (0,1) was.
    auto prefix = prefix_of({3, 0, 1});
    CHECK(markov_context_used(m3, prefix) == 2);
    CHECK(predict_markov(m3, prefix) == predict_markov(m2, prefix));
    // A current node never seen as a source falls back to global counts.
    auto tail = prefix_of({1, 2, 3});
    auto m1 = fit_markov(make_samples(from_paths(4, {{0, 1, 2, 3}})), 4, 1);
    CHECK(markov_context_used(m1, prefix_of({3})) == 0);
    auto g = predict_markov(m1, prefix_of({3}));
    CHECK(g[1] == g[2]);
    CHECK(g[0] < g[1]);
    CHECK(sum(g) == doctest::Approx(1.0).epsilon(1e-12));
    (void)tail;
}

TEST_CASE("markov laplace toy") {
    auto ds = from_paths(3, {{0, 1}, {1, 2}});
    auto m = fit_markov(make_samples(ds), 3, 1, 1.0);
    auto p = predict_markov(m, prefix_of({0}));
    CHECK(p[1] == doctest::Approx(2.0 / 4.0));
    CHECK(p[0] == doctest::Approx(1.0 / 4.0));
    CHECK(p[2] == doctest::Approx(1.0 / 4.0));
    auto q = predict_markov(m, prefix_of({1}));
    CHECK(q[2] == doctest::Approx(0.5));
}

TEST_CASE("poisson") {
    CascadeDataset ds;
    ds.num_nodes = 2;
    ds.cascades = {{"a", {{0, 0.0}, {1, 1.0}, {0, 3.0}, {1, 6.0}}}};
    auto m = fit_poisson(make_samples(ds));
    CHECK(m.lambda0 == doctest::Approx(0.5));
    CHECK(predict_time_poisson(m, prefix_of({0, 1})) == doctest::Approx(1.0 + 2.0));
    std::vector<Event> longer{{0, 0.0}, {1, 0.1}, {1, 0.2}, {0, 9.0}};
    CHECK(predict_time_poisson(m, longer) == doctest::Approx(11.0));
    std::vector<double> one{4.0};
    CHECK(1.0 / fit_poisson_gaps(one).lambda0 == 4.0);
    std::vector<double> none{};
    CHECK_THROWS_AS(fit_poisson_gaps(none), ValidationError);
}

TEST_CASE("hawkes likelihood closed forms") {
    HawkesModel m{1.0, 0.0, 1.0};
    std::vector<double> one{2.0};
    CHECK(hawkes_log_likelihood(m, one, 0.0, 5.0) == doctest::Approx(std::log(1.0) - 5.0));
    HawkesModel h{0.5, 0.3, 2.0};
    std::vector<double> two{1.0, 1.5};
    const double want = std::log(0.5) + std::log(0.5 + 0.3 * std::exp(-1.0)) - 0.5 * 3.0 -
                        0.3 / 2.0 * (1.0 - std::exp(-2.0 * 2.0)) - 0.3 / 2.0 * (1.0 - std::exp(-2.0 * 1.5));
    CHECK(hawkes_log_likelihood(h, two, 0.0, 3.0) == doctest::Approx(want));
}

TEST_CASE("hawkes recovers a poisson rate") {
    const double rate = 2.0;
    Rng rng(17);
    std::vector<Cascade> cascades;
    for (int i = 0; i < 50; ++i) {
        Cascade c;
        c.seq_id = std::to_string(i);
        double t = 0.0;
        for (int k = 0; k < 100; ++k) {
            c.events.push_back({0, t});
            t += rng.exponential(rate);
        }
        cascades.push_back(c);
    }
    auto m = fit_hawkes(cascades);
    CHECK(m.gamma0 == doctest::Approx(rate).epsilon(0.2));
    CHECK(m.alpha / m.beta < 0.2);
    double mean = 0.0;
    std::size_t n = 0;
    for (const auto& c : cascades) {
        mean += c.events.back().time - c.events.front().time;
        n += c.events.size() - 1;
    }
    HawkesModel init{double(n) / mean, 0.0, m.beta};
    CHECK(hawkes_cascade_log_likelihood(m, cascades) >= hawkes_cascade_log_likelihood(init, cascades));
}

TEST_CASE("hawkes prediction") {
    HawkesModel flat{2.0, 0.0, 1.0};
    std::vector<Event> prefix{{0, 0.0}, {0, 3.0}};
    CHECK(predict_time_hawkes(flat, prefix) == doctest::Approx(3.5).epsilon(1e-6));
    HawkesModel excited{2.0, 1.5, 1.0};
    CHECK(predict_time_hawkes(excited, prefix) < predict_time_hawkes(flat, prefix));
    std::vector<Event> first{{0, 4.0}};
    // Only the current event: its own excitation is part of the history.
    CHECK(predict_time_hawkes(HawkesModel{2.0, 1.5, 1.0}, std::vector<Event>{{0, 4.0}}) <= 4.5);
    (void)first;
}

TEST_CASE("scp") {
    std::vector<Cascade> regular;
    for (int i = 0; i < 20; ++i) {
        Cascade c;
        c.seq_id = std::to_string(i);
        for (int k = 0; k < 15; ++k) c.events.push_back({0, 5.0 * i + k});
        regular.push_back(c);
    }
    auto m = fit_scp(regular);
    std::vector<Event> prefix;
    for (int k = 0; k < 6; ++k) prefix.push_back({0, double(k)});
    CHECK(predict_time_scp(m, prefix) - 5.0 == doctest::Approx(1.0).epsilon(0.2));
    ScpModel init{1.0, 1.0};
    CHECK(scp_log_likelihood(m, regular) >= scp_log_likelihood(init, regular));

    // Unit-rate limit: mu -> 0, alpha -> 0 gives exponential(1) gaps.
    ScpModel limit{1e-12, 1e-12};
    CHECK(predict_time_scp(limit, std::vector<Event>{{0, 0.0}}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ctmc rates") {
    CascadeDataset ds;
    ds.num_nodes = 3;
    for (int i = 0; i < 100; ++i) ds.cascades.push_back({std::to_string(i), {{0, 10.0 * i}, {1, 10.0 * i + 2.0}}});
    auto m = fit_ctmc(make_samples(ds), 3);
    CHECK(m.rates(0, 1) == doctest::Approx(0.5));
    auto p = predict_ctmc(m, 0, 7.0);
    CHECK(p.node == 1);
    CHECK(p.time == doctest::Approx(9.0));
    CHECK_FALSE(p.backed_off);

    CascadeDataset race;
    race.num_nodes = 3;
    race.cascades = {{"a", {{0, 0.0}, {1, 4.0}}}, {"b", {{0, 0.0}, {1, 2.0}}}, {"c", {{0, 0.0}, {1, 2.0}}},
                     {"d", {{0, 0.0}, {2, 2.0}}}};
    auto r = fit_ctmc(make_samples(race), 3);
    CHECK(r.rates(0, 1) == doctest::Approx(0.3));
    CHECK(r.rates(0, 2) == doctest::Approx(0.1));
    auto rp = predict_ctmc(r, 0, 1.0);
    CHECK(rp.node == 1);
    CHECK(rp.time == doctest::Approx(3.5));
    CHECK(sum(rp.probabilities) == doctest::Approx(1.0).epsilon(1e-12));

    auto unseen = predict_ctmc(r, 2, 0.0);
    CHECK(unseen.backed_off);
    CHECK(unseen.node == 1);

    CascadeDataset loops;
    loops.num_nodes = 2;
    loops.cascades = {{"a", {{0, 0.0}, {0, 1.0}, {1, 2.0}}}};
    auto l = fit_ctmc(make_samples(loops), 2);
    CHECK(l.rates(0, 0) == 0.0);
    CHECK(l.rates(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("baseline envelopes round trip") {
    auto ds = from_paths(3, {{0, 1, 2, 0}, {2, 1, 0}});
    auto samples = make_samples(ds);
    auto mk = fit_markov(samples, 3, 2);
    auto mk2 = markov_from_envelope(to_envelope(mk));
    CHECK(mk2.order == 2);
    CHECK(mk2.tables == mk.tables);
    CHECK(mk2.global == mk.global);

    PoissonModel po{0.123456789};
    CHECK(poisson_from_envelope(to_envelope(po)).lambda0 == po.lambda0);
    HawkesModel hk{0.1, 0.2, 10.0};
    auto hk2 = hawkes_from_envelope(to_envelope(hk));
    CHECK(hk2.gamma0 == hk.gamma0);
    CHECK(hk2.alpha == hk.alpha);
    CHECK(hk2.beta == hk.beta);
    ScpModel sc{1.0 / 3.0, 7.0};
    CHECK(scp_from_envelope(to_envelope(sc)).mu == sc.mu);
    auto ct = fit_ctmc(samples, 3);
    auto ct2 = ctmc_from_envelope(to_envelope(ct));
    CHECK(ct2.rates == ct.rates);
    CHECK(ct2.global_rates == ct.global_rates);
    CHECK_THROWS_AS(poisson_from_envelope(to_envelope(hk)), ValidationError);
}
