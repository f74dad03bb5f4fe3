// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/numtheory.hpp"

#include <stdexcept>

namespace hevx {

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t p) {
    uint64_t acc = 1;
    base %= p;
    while (exp != 0) {
        if (exp & 1) acc = mul_mod(acc, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return acc;
}

uint64_t inv_mod(uint64_t a, uint64_t p) {
    if (a % p == 0) throw std::invalid_argument("inv_mod: zero has no inverse");
    return pow_mod(a, p - 2, p);
}

bool is_prime_u64(uint64_t v) {
    if (v < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (v == q) return true;
        if (v % q == 0) return false;
    }
    uint64_t d = v - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This base set is deterministic for all 64-bit integers.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = pow_mod(a, d, v);
        if (x == 1 || x == v - 1) continue;
        bool witness = true;
        for (unsigned i = 0; i + 1 < r; ++i) {
            x = mul_mod(x, x, v);
            if (x == v - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

uint64_t primitive_root_2n(uint64_t p, size_t n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("primitive_root_2n: n must be a power of two");
    uint64_t order = 2 * static_cast<uint64_t>(n);
    if ((p - 1) % order != 0) throw std::invalid_argument("primitive_root_2n: p != 1 mod 2n");
    uint64_t cofactor = (p - 1) / order;
    for (uint64_t g = 2; g < p; ++g) {
        uint64_t w = pow_mod(g, cofactor, p);
        // order divides 2n (a power of two); w^n == -1 pins it to exactly 2n
        if (pow_mod(w, n, p) == p - 1) return w;
    }
    throw std::runtime_error("primitive_root_2n: no root found");
}

}  // namespace hevx
