#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "gbtpp/core/cascade.hpp"
#include "gbtpp/numerics/matrix.hpp"

namespace gbtpp {

/// Multivariate Hawkes process
///   lambda_u(t) = mu_u + sum_{t_i < t} a_{u, u_i} exp(-beta (t - t_i)).
struct HawkesParams {
    std::size_t dim = 0;  // U
    Vector mu;
    DenseMatrix a;        // a(u, v): excitation of u by an event at v
    double beta = 1.0;
};

/// Validates shapes, signs and stability (spectral radius of A / beta below 1).
/// Throws ValidationError.
[[nodiscard]] HawkesParams make_hawkes_params(Vector mu, DenseMatrix a, double beta);

/// Row bands of the factor matrices, [lo, hi) per block.
struct BandLayout {
    std::vector<std::pair<std::size_t, std::size_t>> bands;
    bool clamped = false;
};

/// Nine overlapping bands; block i (1-based) covers rows [s (i-1), s (i+1))
/// with s = U / 10 (floor/ceil for non-multiples), clamped to [0, U).
[[nodiscard]] BandLayout band_layout(std::size_t dim);

struct SynthesisConfig {
    std::size_t blocks = 9;
    double mu_max = 0.001;
    double factor_max = 0.1;
    double spectral_radius = 0.8;
    double beta = 1.0;
};

/// mu ~ U[0, mu_max]; A = P Q^T with banded P, Q (entries U[0, factor_max] inside
/// the bands, zero elsewhere), then rescaled to the target spectral radius.
[[nodiscard]] HawkesParams synthesize_params(std::size_t dim, std::uint64_t seed, const SynthesisConfig& cfg = {});

/// A * (target / rho(A)). Throws ValidationError for a zero matrix.
[[nodiscard]] DenseMatrix scale_spectral_radius(const DenseMatrix& a, double target);

struct SimConfig {
    std::size_t n_sequences = 2000;
    std::size_t max_events = 20;
    double horizon = 1e6;
    std::uint64_t seed = 0;
};

struct SimResult {
    CascadeDataset dataset;
    /// Sequences with fewer than two events that were discarded and redrawn.
    std::size_t regenerated = 0;
    std::size_t candidates = 0;
    std::size_t accepted = 0;
};

/// Ogata thinning. Sequence i uses the RNG substream (seed, i), so results do
/// not depend on generation order. Each sequence ends at max_events or when the
/// next event would fall after the horizon.
[[nodiscard]] SimResult simulate(const HawkesParams& p, const SimConfig& cfg);

/// Solves (I - A / beta) x = mu, the long-run event rate per node.
[[nodiscard]] Vector stationary_intensity(const HawkesParams& p);

/// JSON sidecar: parameters, seed and the simulation settings.
void write_sim_sidecar(const HawkesParams& p, const SimConfig& cfg, const SimResult& res, std::uint64_t param_seed,
                       std::ostream& out);

}  // namespace gbtpp
