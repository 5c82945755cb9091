#pragma once

// Deterministic randomness: SplitMix64 for seed derivation and hashing,
// xoshiro256++ for the sampling streams. Every random decision in the library
// flows from an explicit 64-bit seed; there is no wall-clock entropy.

#include <cstdint>

namespace hybridkc {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// hash(master, a, b) used for per-(guess, repetition) seed derivation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    SplitMix64 mix(master);
    std::uint64_t h = mix.next();
    mix.state = h ^ (a + 0x9e3779b97f4a7c15ULL);
    h = mix.next();
    mix.state = h ^ (b + 0xbf58476d1ce4e5b9ULL);
    return mix.next();
}

class Xoshiro256PlusPlus {
public:
    explicit Xoshiro256PlusPlus(std::uint64_t seed) {
        SplitMix64 mix(seed);
        for (auto& word : state_) word = mix.next();
    }

    std::uint64_t next() {
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

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [0, bound); Lemire's multiply-shift, no modulo bias
    std::uint64_t next_below(std::uint64_t bound) {
        while (true) {
            const std::uint64_t x = next();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
            const std::uint64_t low = static_cast<std::uint64_t>(m);
            if (low >= bound || low >= (0ULL - bound) % bound)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    // split off an independent stream, advancing this one
    Xoshiro256PlusPlus split() { return Xoshiro256PlusPlus(next() ^ 0xa0761d6478bd642fULL); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace hybridkc
