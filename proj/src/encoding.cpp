// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hevx/schemes.hpp"

namespace hevx {

namespace {

using Complex = std::complex<double>;

// Shared FFT tables per ring degree: n-th roots of unity plus the odd-power
// twist factors zeta^j (zeta = exp(i*pi/n)) used by the canonical embedding.
struct FftPlan {
    size_t n = 0;
    std::vector<Complex> roots;     // exp(2*pi*i*k/n), k < n/2
    std::vector<size_t> bitrev;
    std::vector<Complex> zeta_pos;  // zeta^j
    std::vector<Complex> zeta_neg;  // zeta^-j

    explicit FftPlan(size_t degree) : n(degree) {
        const double pi = std::acos(-1.0);
        roots.resize(n / 2);
        for (size_t k = 0; k < n / 2; ++k)
            roots[k] = std::polar(1.0, 2.0 * pi * double(k) / double(n));
        unsigned logn = 0;
        while ((size_t(1) << logn) < n) ++logn;
        bitrev.resize(n);
        for (size_t i = 0; i < n; ++i) {
            size_t r = 0, v = i;
            for (unsigned b = 0; b < logn; ++b) {
                r = (r << 1) | (v & 1);
                v >>= 1;
            }
            bitrev[i] = r;
        }
        zeta_pos.resize(n);
        zeta_neg.resize(n);
        for (size_t j = 0; j < n; ++j) {
            zeta_pos[j] = std::polar(1.0, pi * double(j) / double(n));
            zeta_neg[j] = std::conj(zeta_pos[j]);
        }
    }
};

const FftPlan& fft_plan(size_t n) {
    static std::mutex mu;
    static std::map<size_t, FftPlan> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, FftPlan(n)).first;
    return it->second;
}

// In-place radix-2 transform: a[k] <- sum_j a[j] * w^(jk) with w = exp(±2*pi*i/n).
void fft_inplace(std::vector<Complex>& a, const FftPlan& plan, bool negative_sign) {
    const size_t n = a.size();
    for (size_t i = 0; i < n; ++i) {
        size_t r = plan.bitrev[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const size_t half = len >> 1;
        const size_t step = n / len;
        for (size_t base = 0; base < n; base += len) {
            for (size_t j = 0; j < half; ++j) {
                Complex w = plan.roots[j * step];
                if (negative_sign) w = std::conj(w);
                const Complex u = a[base + j];
                const Complex v = a[base + j + half] * w;
                a[base + j] = u + v;
                a[base + j + half] = u - v;
            }
        }
    }
}

}  // namespace

Plaintext ckks_encode(std::span<const double> values, int32_t scale_log2, const ParamSet& params) {
    if (params.scheme != Scheme::Ckks) throw std::invalid_argument("ckks_encode: CKKS parameters required");
    const size_t n = params.ring_degree_n;
    const size_t slots = n / 2;
    if (values.size() > slots) throw std::invalid_argument("ckks_encode: more values than slots");

    const FftPlan& plan = fft_plan(n);
    const double delta = std::exp2(static_cast<double>(scale_log2));

    // Hermitian-extended evaluation targets: slot k lives at the root
    // zeta^(2k+1), its conjugate partner at index n-1-k.
    std::vector<Complex> w(n, Complex(0.0, 0.0));
    for (size_t k = 0; k < slots; ++k) {
        const double v = k < values.size() ? values[k] : 0.0;
        const Complex scaled(v * delta, 0.0);
        w[k] = scaled;
        w[n - 1 - k] = std::conj(scaled);
    }

    // coef_j = zeta^-j * (1/n) * sum_k w_k * omega^(-jk)
    fft_inplace(w, plan, /*negative_sign=*/true);
    const double inv_n = 1.0 / static_cast<double>(n);

    auto ctx = RingContext::get(params);
    const uint128_t q = ctx->modulus_product(params.limb_count());
    const uint128_t q_half = q >> 1;

    std::vector<int128_t> centered(n);
    for (size_t j = 0; j < n; ++j) {
        const double c = (w[j] * plan.zeta_neg[j]).real() * inv_n;
        const double rounded = std::nearbyint(c);
        const int128_t as_int = static_cast<int128_t>(rounded);
        const uint128_t mag = rounded < 0 ? static_cast<uint128_t>(-as_int) : static_cast<uint128_t>(as_int);
        if (mag > q_half) throw std::overflow_error("ckks_encode: scaled value exceeds the ciphertext modulus");
        centered[j] = as_int;
    }
    RingElement poly = rns_decompose(centered, ctx, params.limb_count(), Domain::Coefficient);
    return PlainPoly{std::move(poly), scale_log2};
}

std::vector<double> ckks_decode(const PlainPoly& pt) {
    RingElement poly = pt.poly.domain() == Domain::Ntt ? ntt_inverse(pt.poly) : pt.poly;
    const size_t n = poly.degree();
    const FftPlan& plan = fft_plan(n);

    const auto centered = crt_reconstruct(poly);
    std::vector<Complex> a(n);
    for (size_t j = 0; j < n; ++j)
        a[j] = plan.zeta_pos[j] * static_cast<double>(centered[j]);

    // slot_k = sum_j c_j * zeta^((2k+1)j)
    fft_inplace(a, plan, /*negative_sign=*/false);

    const double delta = std::exp2(static_cast<double>(pt.scale_log2));
    std::vector<double> out(n / 2);
    for (size_t k = 0; k < n / 2; ++k) out[k] = a[k].real() / delta;
    return out;
}

Plaintext int_encode(uint64_t value, const ParamSet& params) {
    if (params.scheme == Scheme::Ckks) throw std::invalid_argument("int_encode: BFV/BGV parameters required");
    if (value >= params.plaintext_modulus_t) throw std::out_of_range("int_encode: value >= plaintext modulus");
    auto ctx = RingContext::get(params);
    RingElement poly = RingElement::zero(ctx, params.limb_count(), Domain::Coefficient);
    for (size_t i = 0; i < poly.limb_count(); ++i)
        poly.limb(i)[0] = value % poly.limb_prime(i);
    return PlainPoly{std::move(poly), 0};
}

uint64_t int_decode(const Plaintext& pt, const ParamSet& params) {
    const uint64_t t = params.plaintext_modulus_t;
    if (t < 2) throw std::invalid_argument("int_decode: parameters carry no plaintext modulus");
    if (const auto* pi = std::get_if<PlainInteger>(&pt)) return pi->value % t;
    const auto* pp = std::get_if<PlainPoly>(&pt);
    if (pp == nullptr) throw std::invalid_argument("int_decode: integer or poly plaintext required");
    RingElement poly = pp->poly.domain() == Domain::Ntt ? ntt_inverse(pp->poly) : pp->poly;
    const auto centered = crt_reconstruct(poly);
    int128_t r = centered[0] % static_cast<int128_t>(t);
    if (r < 0) r += t;
    return static_cast<uint64_t>(r);
}

}  // namespace hevx
