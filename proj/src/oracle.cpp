// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force negacyclic product over CRT-lifted big integers. This is the
// reference oracle the NTT path is checked against, so it must not share any
// transform machinery with ring_mul.

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>

#include "hevx/ring.hpp"

namespace hevx {

using boost::multiprecision::cpp_int;

RingElement schoolbook_negacyclic_mul(const RingElement& x, const RingElement& y) {
    if (x.domain() != Domain::Coefficient || y.domain() != Domain::Coefficient)
        throw std::invalid_argument("schoolbook_negacyclic_mul: coefficient domain required");
    if (x.degree() != y.degree() || x.limb_count() != y.limb_count())
        throw std::invalid_argument("schoolbook_negacyclic_mul: mismatched shapes");

    const size_t n = x.degree();
    const auto xc = crt_reconstruct(x);
    const auto yc = crt_reconstruct(y);

    cpp_int q = 1;
    for (size_t i = 0; i < x.limb_count(); ++i) q *= x.limb_prime(i);

    std::vector<cpp_int> xb(n), yb(n), acc(n, 0);
    for (size_t i = 0; i < n; ++i) {
        xb[i] = cpp_int(xc[i]);
        yb[i] = cpp_int(yc[i]);
    }

    for (size_t i = 0; i < n; ++i) {
        if (xb[i] == 0) continue;
        for (size_t j = 0; j < n; ++j) {
            const size_t k = i + j;
            cpp_int term = xb[i] * yb[j];
            if (k < n) acc[k] += term;
            else acc[k - n] -= term;  // x^n = -1
        }
    }

    std::vector<int128_t> centered(n);
    const cpp_int half = q >> 1;
    for (size_t k = 0; k < n; ++k) {
        cpp_int r = acc[k] % q;
        if (r < 0) r += q;
        if (r > half) r -= q;
        centered[k] = static_cast<int128_t>(r);
    }
    return rns_decompose(centered, x.context(), x.limb_count(), Domain::Coefficient);
}

}  // namespace hevx
