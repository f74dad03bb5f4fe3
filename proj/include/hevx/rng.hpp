// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_RNG_HPP
#define HEVX_RNG_HPP

#include <cstdint>
#include <random>

namespace hevx {

/// splitmix64 step; used to derive independent substreams from one seed.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic randomness source. Benchmarks and tests construct it from an
/// explicit 64-bit seed; real runs may use from_entropy(). Not a CSPRNG; this
/// is a benchmarking artifact, not production key material.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    static Rng from_entropy() {
        std::random_device rd;
        uint64_t seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
        return Rng(seed);
    }

    uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, bound), bound > 0. Rejection keeps it unbiased.
    uint64_t uniform_below(uint64_t bound) {
        uint64_t limit = ~uint64_t(0) - ~uint64_t(0) % bound;
        uint64_t r;
        do {
            r = gen_();
        } while (r >= limit);
        return r % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

    bool bernoulli(double p) { return uniform_real() < p; }

    /// Derived generator with an independent stream.
    Rng fork(uint64_t stream) {
        uint64_t s = gen_() ^ (0xa0761d6478bd642full * (stream + 1));
        return Rng(s);
    }

private:
    std::mt19937_64 gen_;
};

/// Stable per-trial, per-role seed derivation.
inline uint64_t derive_seed(uint64_t base, uint64_t trial, uint64_t stream) {
    uint64_t s = base;
    (void)splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ull * (trial + 1);
    (void)splitmix64(s);
    s ^= 0xc2b2ae3d27d4eb4full * (stream + 1);
    return splitmix64(s);
}

}  // namespace hevx

#endif
