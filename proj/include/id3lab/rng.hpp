#pragma once

#include <cstdint>
#include <stdexcept>

namespace id3lab {

/// splitmix64: used for seeding and for deriving independent substreams.
struct splitmix64 {
    std::uint64_t state;

    explicit splitmix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// Derives a statistically independent seed for substream `index` of `seed`.
/// Used to give every trial / sampler its own generator.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    splitmix64 sm(seed ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL));
    (void)sm.next();
    return sm.next();
}

/// xoshiro256** (Blackman/Vigna). Seeded through splitmix64 so that any
/// 64-bit value, including 0, is a valid seed. All randomness in the library
/// flows through this generator; results are reproducible bit-for-bit for a
/// given seed on any platform.
class rng {
public:
    using result_type = std::uint64_t;

    explicit rng(std::uint64_t seed = 0) {
        splitmix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    std::uint64_t operator()() { return next_u64(); }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }

    /// Uniform double in [0, 1), 53 usable bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [-c, c), sampled as c*(2u - 1).
    double uniform_sym(double c) { return c * (2.0 * uniform01() - 1.0); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, bound) by rejection; bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("rng::below: bound must be > 0");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace id3lab
