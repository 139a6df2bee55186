#ifndef CCLAB_RNG_HPP
#define CCLAB_RNG_HPP

#include <array>
#include <bit>
#include <cstdint>

namespace cclab {

// splitmix64 step; also used as the seed-derivation mixer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
    std::uint64_t s = h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2));
    return splitmix64_next(s);
}

// FNV-1a, for deriving stream seeds from stable string labels.
inline std::uint64_t fnv1a64(const char* data, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ull;
    }
    return h;
}

// Per-task seeds are derived from (master, key components), never from
// scheduling order, so parallel runs are bit-reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0, std::uint64_t d = 0) {
    std::uint64_t h = hash_mix(0x8ad1f86c2f4b6a3bull, master);
    h = hash_mix(h, a);
    h = hash_mix(h, b);
    h = hash_mix(h, c);
    h = hash_mix(h, d);
    return h;
}

// xoshiro256++ with fully specified integer/double conversions. The standard
// library distributions are implementation-defined, so everything downstream
// draws through this class only.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ull;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    double uniform(double a, double b) { return a + next_double() * (b - a); }

    // Unbiased integer in [0, bound), 64-bit bound. Rejection sampling on the
    // smallest covering power of two.
    std::uint64_t next_below64(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const int bits = 64 - std::countl_zero(bound - 1);
        const std::uint64_t mask = bits == 64 ? ~0ull : (1ull << bits) - 1;
        for (;;) {
            const std::uint64_t x = next_u64() & mask;
            if (x < bound) return x;
        }
    }

    // Unbiased integer in [0, bound). Lemire's method with rejection.
    std::uint32_t next_below(std::uint32_t bound) {
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - std::uint64_t(bound)) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace cclab

#endif
