#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/error.hpp"
#include "gbtpp/numerics/linalg.hpp"
#include "gbtpp/sim/hawkes_sim.hpp"

#include <json.hpp>

using namespace gbtpp;

TEST_CASE("synthesized parameters") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto p = synthesize_params(20, seed);
        CHECK(spectral_radius(p.a) == doctest::Approx(0.8).epsilon(1e-6));
        for (double m : p.mu) {
            CHECK(m >= 0.0);
            CHECK(m <= 0.001);
        }
        // A = P Q^T is nonzero only where a row band of P meets a row band of Q
        // in the same block.
        auto layout = band_layout(20);
        for (std::size_t u = 0; u < 20; ++u)
            for (std::size_t v = 0; v < 20; ++v) {
                bool inside = false;
                for (auto [lo, hi] : layout.bands) inside |= (u >= lo && u < hi && v >= lo && v < hi);
                CHECK(p.a(u, v) >= 0.0);
                if (!inside) CHECK(p.a(u, v) == 0.0);
            }
    }
    auto a = synthesize_params(20, 5), b = synthesize_params(20, 5);
    CHECK(a.a == b.a);
    CHECK(a.mu == b.mu);
}

TEST_CASE("band layout") {
    auto l = band_layout(100);
    REQUIRE(l.bands.size() == 9);
    CHECK(l.bands[0] == std::pair<std::size_t, std::size_t>{0, 20});
    CHECK(l.bands[8] == std::pair<std::size_t, std::size_t>{80, 100});
    CHECK_FALSE(l.clamped);
    auto small = band_layout(5);
    for (auto [lo, hi] : small.bands) {
        CHECK(lo < hi);
        CHECK(hi <= 5);
    }
}

TEST_CASE("scale spectral radius") {
    auto id = DenseMatrix::identity(3);
    auto s = scale_spectral_radius(id, 0.8);
    for (std::size_t i = 0; i < 3; ++i) CHECK(s(i, i) == doctest::Approx(0.8));
    auto again = scale_spectral_radius(s, 0.8);
    for (std::size_t k = 0; k < 9; ++k) CHECK(again.data()[k] == doctest::Approx(s.data()[k]).epsilon(1e-12));
    DenseMatrix m(2, 2, std::vector<double>{0.1, 0.4, 0.2, 0.3});
    CHECK(spectral_radius(scale_spectral_radius(m, 0.3)) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK_THROWS_AS(scale_spectral_radius(DenseMatrix(2, 2), 0.5), ValidationError);
}

TEST_CASE("hawkes params validation") {
    CHECK_THROWS_AS(make_hawkes_params({1.0}, DenseMatrix(1, 1, 1.5), 1.0), ValidationError);
    CHECK_NOTHROW(make_hawkes_params({1.0}, DenseMatrix(1, 1, 1.5), 2.0));
    CHECK_THROWS_AS(make_hawkes_params({-1.0}, DenseMatrix(1, 1), 1.0), ValidationError);
    CHECK_THROWS_AS(make_hawkes_params({1.0, 1.0}, DenseMatrix(1, 1), 1.0), ValidationError);
}

TEST_CASE("stationary intensity") {
    auto zero = make_hawkes_params({0.5, 1.5}, DenseMatrix(2, 2), 1.0);
    CHECK(stationary_intensity(zero) == Vector{0.5, 1.5});
    auto one = make_hawkes_params({1.0}, DenseMatrix(1, 1, 0.5), 1.0);
    CHECK(stationary_intensity(one)[0] == doctest::Approx(2.0));
    auto p = synthesize_params(10, 3);
    auto x = stationary_intensity(p);
    for (std::size_t u = 0; u < 10; ++u) CHECK(x[u] >= p.mu[u]);
}

TEST_CASE("poisson event count") {
    auto p = make_hawkes_params({2.0}, DenseMatrix(1, 1), 1.0);
    SimConfig cfg;
    cfg.n_sequences = 1;
    cfg.max_events = 1'000'000;
    cfg.horizon = 1000.0;
    cfg.seed = 3;
    auto r = simulate(p, cfg);
    const double n = double(r.dataset.num_events());
    CHECK(std::abs(n - 2000.0) <= 3.0 * std::sqrt(2000.0));
}

TEST_CASE("independent poisson nodes pass chi-square") {
    auto p = make_hawkes_params({1.0, 2.0, 3.0, 4.0}, DenseMatrix(4, 4), 1.0);
    SimConfig cfg;
    cfg.n_sequences = 200;
    cfg.max_events = 100'000;
    cfg.horizon = 10.0;
    cfg.seed = 8;
    auto r = simulate(p, cfg);
    std::vector<double> counts(4, 0.0);
    for (const auto& c : r.dataset.cascades)
        for (const auto& e : c.events) counts[e.node] += 1.0;
    double chi2 = 0.0;
    for (std::size_t u = 0; u < 4; ++u) {
        const double expect = p.mu[u] * cfg.horizon * double(cfg.n_sequences);
        chi2 += (counts[u] - expect) * (counts[u] - expect) / expect;
    }
    CHECK(chi2 < 18.47);  // 99.9% quantile, 4 degrees of freedom
}

TEST_CASE("simulation determinism and validity") {
    auto p = synthesize_params(8, 4);
    SimConfig cfg;
    cfg.n_sequences = 30;
    cfg.seed = 6;
    auto a = simulate(p, cfg);
    auto b = simulate(p, cfg);
    CHECK(a.dataset == b.dataset);
    CHECK(a.regenerated == b.regenerated);
    CHECK(a.dataset.size() == 30);
    CHECK_NOTHROW(validate(a.dataset));
    for (const auto& c : a.dataset.cascades) CHECK(c.size() <= 20);
    cfg.seed = 7;
    CHECK_FALSE(simulate(p, cfg).dataset == a.dataset);

    std::ostringstream out;
    write_sim_sidecar(p, cfg, a, 4, out);
    auto j = nlohmann::json::parse(out.str());
    CHECK(j.at("beta").get<double>() == 1.0);
    CHECK(j.at("mu").size() == 8);
}
