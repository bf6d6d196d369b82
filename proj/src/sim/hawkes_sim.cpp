#include "gbtpp/sim/hawkes_sim.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gbtpp/error.hpp"
#include "gbtpp/numerics/kernels.hpp"
#include "gbtpp/numerics/linalg.hpp"
#include "gbtpp/numerics/rng.hpp"

namespace gbtpp {

HawkesParams make_hawkes_params(Vector mu, DenseMatrix a, double beta) {
    const std::size_t U = mu.size();
    if (U == 0) throw ValidationError("Hawkes dimension must be positive");
    if (a.rows() != U || a.cols() != U) throw ValidationError("infectivity matrix must be U x U");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("Hawkes beta must be positive");
    for (double m : mu) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw ValidationError("base intensities must be finite and >= 0");
    }
    for (double x : a.data()) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("infectivity entries must be finite and >= 0");
    }
    const double rho = spectral_radius(a) / beta;
    if (!(rho < 1.0)) {
        throw ValidationError("unstable Hawkes process: spectral radius of A / beta is " + std::to_string(rho));
    }
    return {U, std::move(mu), std::move(a), beta};
}

BandLayout band_layout(std::size_t dim) {
    BandLayout out;
    const double s = static_cast<double>(dim) / 10.0;
    for (std::size_t i = 1; i <= 9; ++i) {
        const double lo_raw = std::floor(s * static_cast<double>(i - 1));
        const double hi_raw = std::ceil(s * static_cast<double>(i + 1));
        auto lo = static_cast<std::size_t>(lo_raw);
        auto hi = static_cast<std::size_t>(hi_raw);
        if (hi > dim) {
            hi = dim;
            out.clamped = true;
        }
        if (lo >= hi) {
            // tiny U: keep every band non-empty
            lo = std::min(lo, dim - 1);
            hi = lo + 1;
            out.clamped = true;
        }
        out.bands.emplace_back(lo, hi);
    }
    return out;
}

DenseMatrix scale_spectral_radius(const DenseMatrix& a, double target) {
    const double rho = spectral_radius(a);
    if (!(rho > 0.0)) throw ValidationError("cannot rescale a matrix with zero spectral radius");
    DenseMatrix out = a;
    out *= target / rho;
    return out;
}

HawkesParams synthesize_params(std::size_t dim, std::uint64_t seed, const SynthesisConfig& cfg) {
    if (dim == 0) throw ValidationError("Hawkes dimension must be positive");
    Rng rng(seed);
    Vector mu(dim);
    for (double& m : mu) m = rng.uniform(0.0, cfg.mu_max);

    const BandLayout layout = band_layout(dim);
    const std::size_t B = layout.bands.size();
    DenseMatrix P(dim, B), Q(dim, B);
    for (DenseMatrix* f : {&P, &Q}) {
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t r = layout.bands[b].first; r < layout.bands[b].second; ++r) {
                (*f)(r, b) = rng.uniform(0.0, cfg.factor_max);
            }
        }
    }
    DenseMatrix a(dim, dim);
    for (std::size_t u = 0; u < dim; ++u) {
        for (std::size_t v = 0; v < dim; ++v) a(u, v) = kernels::dot(P.row(u), Q.row(v));
    }
    return make_hawkes_params(std::move(mu), scale_spectral_radius(a, cfg.spectral_radius), cfg.beta);
}

namespace {

// One sequence by thinning. The total intensity only decays between events,
// so its value right after the last event (or rejection) dominates until the
// next candidate.
Cascade simulate_one(const HawkesParams& p, const SimConfig& cfg, Rng& rng, std::size_t& candidates,
                     std::size_t& accepted) {
    const std::size_t U = p.dim;
    Cascade c;
    Vector exc(U, 0.0), lam(U);
    double mu_total = 0.0;
    for (double m : p.mu) mu_total += m;
    double exc_total = 0.0;
    double t = 0.0;
    while (c.events.size() < cfg.max_events) {
        const double bound = mu_total + exc_total;
        if (!(bound > 0.0)) break;
        const double gap = rng.exponential(bound);
        const double t_next = t + gap;
        if (t_next > cfg.horizon) break;
        const double decay = std::exp(-p.beta * gap);
        exc_total = 0.0;
        for (std::size_t u = 0; u < U; ++u) {
            exc[u] *= decay;
            exc_total += exc[u];
        }
        t = t_next;
        ++candidates;
        const double total = mu_total + exc_total;
        if (total > bound * (1.0 + 1e-12)) throw NumericalError("thinning acceptance probability exceeds 1");
        if (rng.uniform() * bound >= total) continue;
        if (!c.events.empty() && !(t > c.events.back().time)) continue;
        for (std::size_t u = 0; u < U; ++u) lam[u] = p.mu[u] + exc[u];
        const auto node = static_cast<NodeId>(rng.categorical(lam));
        c.events.push_back({node, t});
        ++accepted;
        exc_total = 0.0;
        for (std::size_t u = 0; u < U; ++u) {
            exc[u] += p.a(u, node);
            exc_total += exc[u];
        }
    }
    return c;
}

}  // namespace

SimResult simulate(const HawkesParams& p, const SimConfig& cfg) {
    if (cfg.n_sequences == 0 || cfg.max_events == 0 || !(cfg.horizon > 0.0)) {
        throw ValidationError("simulation needs positive n_sequences, max_events and horizon");
    }
    constexpr std::size_t kMaxAttempts = 10'000;
    SimResult res;
    res.dataset.num_nodes = p.dim;
    res.dataset.cascades.reserve(cfg.n_sequences);
    for (std::size_t i = 0; i < cfg.n_sequences; ++i) {
        Rng rng = Rng::substream(cfg.seed, i);
        Cascade c;
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt == kMaxAttempts) {
                throw NumericalError("sequence " + std::to_string(i) + " never reached two events; raise the horizon");
            }
            c = simulate_one(p, cfg, rng, res.candidates, res.accepted);
            if (c.events.size() >= 2) break;
            ++res.regenerated;
        }
        c.seq_id = "s" + std::to_string(i);
        res.dataset.cascades.push_back(std::move(c));
    }
    return res;
}

Vector stationary_intensity(const HawkesParams& p) {
    DenseMatrix m = DenseMatrix::identity(p.dim);
    for (std::size_t u = 0; u < p.dim; ++u) {
        for (std::size_t v = 0; v < p.dim; ++v) m(u, v) -= p.a(u, v) / p.beta;
    }
    return solve_linear(std::move(m), p.mu);
}

void write_sim_sidecar(const HawkesParams& p, const SimConfig& cfg, const SimResult& res, std::uint64_t param_seed,
                       std::ostream& out) {
    nlohmann::json j;
    j["U"] = p.dim;
    j["beta"] = p.beta;
    j["mu"] = p.mu;
    std::vector<std::vector<double>> rows;
    for (std::size_t u = 0; u < p.dim; ++u) rows.emplace_back(p.a.row(u).begin(), p.a.row(u).end());
    j["A"] = rows;
    j["spectral_radius"] = spectral_radius(p.a);
    j["param_seed"] = param_seed;
    j["seed"] = cfg.seed;
    j["n_sequences"] = cfg.n_sequences;
    j["max_events"] = cfg.max_events;
    j["horizon"] = cfg.horizon;
    j["regenerated"] = res.regenerated;
    j["candidates"] = res.candidates;
    j["accepted"] = res.accepted;
    const BandLayout layout = band_layout(p.dim);
    j["bands"] = layout.bands;
    j["band_clamped"] = layout.clamped;
    out << j.dump(1) << '\n';
}

}  // namespace gbtpp
