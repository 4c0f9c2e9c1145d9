/**
 * Seeded counter-derived RNG streams for reproducible Monte Carlo runs.
 *
 * Engine is xoshiro256++ seeded through SplitMix64. Substreams are derived
 * by chain-hashing integer ids (seed, cluster, trial, purpose) with
 * SplitMix64, so any (trial, cluster) pair gets an independent stream no
 * matter which worker thread executes it.
 *
 * Header-only, no dependencies beyond <cstdint> and <cmath>.
 */

#ifndef WAVEFRONT_RNG_HPP
#define WAVEFRONT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace wavefront {

/// One SplitMix64 step: advances state and returns the mixed output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Hash a list of ids into one 64-bit stream key. Order-sensitive.
inline std::uint64_t stream_key(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> ids) {
    std::uint64_t h = seed;
    splitmix64_next(h);
    for (std::uint64_t id : ids) {
        h ^= id + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        splitmix64_next(h);
    }
    return h;
}

/// xoshiro256++ with Box-Muller normals. Deterministic per seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + uniform() * (b - a); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Purpose tags for per-trial substreams; values are part of the
/// reproducibility contract (changing them changes every result).
enum class Stream : std::uint64_t {
    truth = 1,    // change slot and true origin
    growth = 2,   // radius growth indicators
    sensors = 3,  // sensor placement
    readings = 4, // observation noise
    scratch = 5,  // anything test-local
};

inline Rng substream(std::uint64_t seed, std::uint64_t cluster,
                     std::uint64_t trial, Stream purpose) {
    return Rng(stream_key(
        seed, {cluster, trial, static_cast<std::uint64_t>(purpose)}));
}

} // namespace wavefront

#endif // WAVEFRONT_RNG_HPP
