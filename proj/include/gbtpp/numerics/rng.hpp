#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gbtpp {

/// Seedable, platform-stable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard library distributions are not (their algorithms are
/// implementation-defined), so every transform below is written out here:
/// uniforms take the top 53 bits, exponentials invert the CDF, and categorical
/// draws scan the cumulative weights.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Independent substream for (seed, index), e.g. one per simulated sequence.
    [[nodiscard]] static Rng substream(std::uint64_t seed, std::uint64_t index);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);
    /// Exponential with the given rate.
    double exponential(double rate);
    /// Index drawn proportionally to nonnegative weights (sum must be positive).
    std::size_t categorical(std::span<const double> weights);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive substream seeds.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace gbtpp
