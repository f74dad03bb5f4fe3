// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_NUMTHEORY_HPP
#define HEVX_NUMTHEORY_HPP

#include <cstddef>
#include <cstdint>

namespace hevx {

using uint128_t = unsigned __int128;
using int128_t = __int128;

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t p) {
    uint64_t s = a + b;
    return (s >= p || s < a) ? s - p : s;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

inline uint64_t neg_mod(uint64_t a, uint64_t p) {
    return a == 0 ? 0 : p - a;
}

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<uint128_t>(a) * b % p);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t p);

/// Inverse of a modulo prime p (Fermat).
uint64_t inv_mod(uint64_t a, uint64_t p);

/// Deterministic Miller-Rabin, valid for the full 64-bit range.
bool is_prime_u64(uint64_t v);

/// Primitive 2n-th root of unity mod p; requires p prime, p ≡ 1 (mod 2n),
/// n a power of two. The result w satisfies w^n ≡ -1 (mod p).
uint64_t primitive_root_2n(uint64_t p, size_t n);

inline bool is_power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline unsigned bit_length(uint64_t v) {
    unsigned bits = 0;
    while (v != 0) {
        ++bits;
        v >>= 1;
    }
    return bits;
}

}  // namespace hevx

#endif
