// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/schemes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hevx {

namespace {

// Message/noise placement factor: BGV carries noise as t*e, BFV and CKKS as e.
std::vector<uint64_t> noise_factor(const ParamSet& ps, size_t limbs) {
    std::vector<uint64_t> f(limbs, 1);
    if (ps.scheme == Scheme::Bgv)
        for (auto& v : f) v = ps.plaintext_modulus_t;
    return f;
}

bool chain_prefix_match(const ParamSet& a, const ParamSet& b) {
    if (a.scheme != b.scheme || a.ring_degree_n != b.ring_degree_n) return false;
    size_t shorter = std::min(a.modulus_limbs.size(), b.modulus_limbs.size());
    for (size_t i = 0; i < shorter; ++i)
        if (a.modulus_limbs[i] != b.modulus_limbs[i]) return false;
    return true;
}

// Zero every limb except `keep`; with the RNS gadget the key-switch term
// g_j * s^2 is exactly s^2 masked to limb j.
RingElement mask_to_limb(const RingElement& x, size_t keep) {
    RingElement out = x;
    for (size_t i = 0; i < out.limb_count(); ++i) {
        if (i == keep) continue;
        auto limb = out.limb(i);
        std::fill(limb.begin(), limb.end(), 0);
    }
    return out;
}

RingElement encode_message_poly(const PublicKey& pk, const Plaintext& pt) {
    const ParamSet& ps = pk.params;
    if (ps.scheme == Scheme::Ckks) {
        if (const auto* rv = std::get_if<PlainRealVector>(&pt)) {
            const int32_t scale = rv->scale_log2 != 0 ? rv->scale_log2 : ps.scale_log2;
            return std::get<PlainPoly>(ckks_encode(rv->values, scale, ps)).poly;
        }
        if (const auto* pp = std::get_if<PlainPoly>(&pt)) return pp->poly;
        throw std::invalid_argument("encrypt: CKKS takes real-vector or poly plaintexts");
    }
    // BFV/BGV integer path
    RingElement m;
    if (const auto* pi = std::get_if<PlainInteger>(&pt))
        m = std::get<PlainPoly>(int_encode(pi->value, ps)).poly;
    else if (const auto* pp = std::get_if<PlainPoly>(&pt))
        m = pp->poly;
    else
        throw std::invalid_argument("encrypt: BFV/BGV take integer plaintexts");

    if (ps.scheme == Scheme::Bfv) {
        // floor(q/t) per limb
        auto ctx = m.context();
        uint128_t q = ctx->modulus_product(m.limb_count());
        uint128_t delta = q / ps.plaintext_modulus_t;
        std::vector<uint64_t> delta_mod(m.limb_count());
        for (size_t i = 0; i < m.limb_count(); ++i)
            delta_mod[i] = static_cast<uint64_t>(delta % m.limb_prime(i));
        m = scalar_mul(m, delta_mod);
    }
    return m;
}

int32_t plaintext_scale(const PublicKey& pk, const Plaintext& pt) {
    if (pk.params.scheme != Scheme::Ckks) return 0;
    if (const auto* rv = std::get_if<PlainRealVector>(&pt))
        return rv->scale_log2 != 0 ? rv->scale_log2 : pk.params.scale_log2;
    if (const auto* pp = std::get_if<PlainPoly>(&pt)) return pp->scale_log2;
    return pk.params.scale_log2;
}

int128_t round_div(int128_t num, uint128_t den) {
    if (num >= 0) return static_cast<int128_t>((static_cast<uint128_t>(num) + den / 2) / den);
    uint128_t mag = static_cast<uint128_t>(-num);
    return -static_cast<int128_t>((mag + den / 2) / den);
}

}  // namespace

KeyBundle keygen(const ParamSet& params, Rng& rng, bool allow_insecure) {
    auto violations = validate(params);
    if (!violations.empty()) throw std::invalid_argument("keygen: invalid parameters: " + violations.front());
    if (!params.secure && !allow_insecure)
        throw std::invalid_argument("keygen: insecure parameters refused without explicit opt-in");

    auto ctx = RingContext::get(params);
    const size_t L = params.limb_count();

    RingElement s = sample_ternary(ctx, L, rng);
    ntt_forward_inplace(s);

    // Uniform residues are uniform in either domain; sample a directly as NTT.
    RingElement a = sample_uniform(ctx, L, rng);
    a.set_domain(Domain::Ntt);

    RingElement e = sample_error(ctx, L, params.error_stddev_sigma, rng);
    ntt_forward_inplace(e);

    const auto f = noise_factor(params, L);
    RingElement b = ring_neg(ntt_pointwise_mul(a, s));
    ring_add_inplace(b, scalar_mul(e, f));

    PublicKey pk{std::move(b), std::move(a), params};

    std::optional<EvalKey> ek;
    if (params.levels >= 2) {
        RingElement s2 = ntt_pointwise_mul(s, s);
        EvalKey k;
        k.params = params;
        for (size_t j = 0; j < L; ++j) {
            RingElement aj = sample_uniform(ctx, L, rng);
            aj.set_domain(Domain::Ntt);
            RingElement ej = sample_error(ctx, L, params.error_stddev_sigma, rng);
            ntt_forward_inplace(ej);
            RingElement bj = ring_neg(ntt_pointwise_mul(aj, s));
            ring_add_inplace(bj, ej);
            ring_add_inplace(bj, mask_to_limb(s2, j));
            k.b.push_back(std::move(bj));
            k.a.push_back(std::move(aj));
        }
        ek = std::move(k);
    }

    KeyBundle bundle{SecretKey(std::move(s), params), std::move(pk), std::move(ek)};
    return bundle;
}

Ciphertext encrypt(const PublicKey& pk, const Plaintext& pt, Rng& rng) {
    const ParamSet& ps = pk.params;
    if (const auto* rv = std::get_if<PlainRealVector>(&pt)) {
        if (rv->values.size() > ps.ring_degree_n / 2)
            throw std::invalid_argument("encrypt: real vector longer than n/2 slots");
    }
    auto ctx = RingContext::get(ps);
    const size_t L = ps.limb_count();

    RingElement m = encode_message_poly(pk, pt);
    if (m.domain() == Domain::Ntt) m = ntt_inverse(m);

    RingElement u = sample_ternary(ctx, L, rng);
    ntt_forward_inplace(u);

    const auto f = noise_factor(ps, L);
    RingElement e0 = scalar_mul(sample_error(ctx, L, ps.error_stddev_sigma, rng), f);
    ring_add_inplace(e0, m);
    ntt_forward_inplace(e0);  // e0 now carries f*e0 + M
    RingElement e1 = scalar_mul(sample_error(ctx, L, ps.error_stddev_sigma, rng), f);
    ntt_forward_inplace(e1);

    RingElement c0 = ntt_pointwise_mul(pk.b, u);
    ring_add_inplace(c0, e0);
    RingElement c1 = ntt_pointwise_mul(pk.a, u);
    ring_add_inplace(c1, e1);

    Ciphertext ct;
    ct.parts = {std::move(c0), std::move(c1)};
    ct.scheme = ps.scheme;
    ct.level = static_cast<int32_t>(L);
    ct.scale_log2 = plaintext_scale(pk, pt);
    ct.params = ps;
    return ct;
}

Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct) {
    if (!chain_prefix_match(sk.params(), ct.params))
        throw std::invalid_argument("decrypt: ciphertext parameters do not match the key");
    if (ct.parts.size() != 2 && ct.parts.size() != 3)
        throw std::invalid_argument("decrypt: ciphertext must have 2 or 3 parts");

    const size_t L = ct.parts[0].limb_count();
    RingElement s = sk.s_ntt().truncated(L);

    RingElement d = ct.parts[0];
    ring_add_inplace(d, ntt_pointwise_mul(ct.parts[1], s));
    if (ct.parts.size() == 3) {
        RingElement s2 = ntt_pointwise_mul(s, s);
        ring_add_inplace(d, ntt_pointwise_mul(ct.parts[2], s2));
    }
    ntt_inverse_inplace(d);

    const ParamSet& ps = sk.params();
    switch (ct.scheme) {
        case Scheme::Bgv: {
            const auto centered = crt_reconstruct(d);
            int128_t r = centered[0] % static_cast<int128_t>(ps.plaintext_modulus_t);
            if (r < 0) r += ps.plaintext_modulus_t;
            return PlainInteger{static_cast<uint64_t>(r)};
        }
        case Scheme::Bfv: {
            const auto centered = crt_reconstruct(d);
            const uint128_t q = d.context()->modulus_product(L);
            int128_t scaled = round_div(static_cast<int128_t>(ps.plaintext_modulus_t) * centered[0], q);
            int128_t r = scaled % static_cast<int128_t>(ps.plaintext_modulus_t);
            if (r < 0) r += ps.plaintext_modulus_t;
            return PlainInteger{static_cast<uint64_t>(r)};
        }
        case Scheme::Ckks: {
            PlainPoly pp{std::move(d), ct.scale_log2};
            auto values = ckks_decode(pp);
            return PlainRealVector{std::move(values), ct.scale_log2};
        }
    }
    throw std::logic_error("decrypt: unknown scheme");
}

Ciphertext he_add(const Ciphertext& x, const Ciphertext& y) {
    if (x.scheme != y.scheme) throw std::invalid_argument("he_add: scheme mismatch");
    if (x.level != y.level) throw std::invalid_argument("he_add: level mismatch");
    if (x.scheme == Scheme::Ckks && x.scale_log2 != y.scale_log2)
        throw std::invalid_argument("he_add: scale mismatch");
    if (x.parts.size() != y.parts.size()) throw std::invalid_argument("he_add: part count mismatch");
    Ciphertext out = x;
    for (size_t i = 0; i < out.parts.size(); ++i) ring_add_inplace(out.parts[i], y.parts[i]);
    return out;
}

Ciphertext rescale(const Ciphertext& ct) {
    if (ct.scheme != Scheme::Ckks) throw std::invalid_argument("rescale: CKKS only");
    if (ct.level < 2) throw std::invalid_argument("rescale: level exhausted");
    const size_t L = ct.parts[0].limb_count();
    const uint64_t dropped = ct.parts[0].limb_prime(L - 1);

    Ciphertext out;
    out.scheme = ct.scheme;
    out.level = ct.level - 1;
    out.scale_log2 = ct.scale_log2 - static_cast<int32_t>(bit_length(dropped));
    out.params = ct.params;

    for (const RingElement& part : ct.parts) {
        RingElement x = part.domain() == Domain::Ntt ? ntt_inverse(part) : part;
        RingElement y = RingElement::zero(x.context(), L - 1, Domain::Coefficient);
        auto top = x.limb(L - 1);
        for (size_t i = 0; i + 1 < L; ++i) {
            const uint64_t p = x.limb_prime(i);
            const uint64_t pl_inv = inv_mod(dropped % p, p);
            auto src = x.limb(i);
            auto dst = y.limb(i);
            for (size_t j = 0; j < src.size(); ++j) {
                // exact integer (x - (x mod p_L)) / p_L, computed limb-wise
                const uint64_t r = top[j] % p;
                dst[j] = mul_mod(sub_mod(src[j], r, p), pl_inv, p);
            }
        }
        ntt_forward_inplace(y);
        out.parts.push_back(std::move(y));
    }
    return out;
}

Ciphertext he_mul_ckks(const Ciphertext& x, const Ciphertext& y, const EvalKey& ek) {
    if (x.scheme != Scheme::Ckks || y.scheme != Scheme::Ckks)
        throw std::invalid_argument("he_mul_ckks: CKKS ciphertexts required");
    if (x.level != y.level) throw std::invalid_argument("he_mul_ckks: level mismatch");
    if (x.level < 2) throw std::invalid_argument("he_mul_ckks: insufficient level");
    if (x.parts.size() != 2 || y.parts.size() != 2)
        throw std::invalid_argument("he_mul_ckks: two-part ciphertexts required");
    const size_t L = x.parts[0].limb_count();
    if (ek.pair_count() != L || !chain_prefix_match(ek.params, x.params))
        throw std::invalid_argument("he_mul_ckks: evaluation key does not match ciphertext level");

    // Tensor product: (c0, c1) x (d0, d1) -> (c0 d0, c0 d1 + c1 d0, c1 d1).
    RingElement t0 = ntt_pointwise_mul(x.parts[0], y.parts[0]);
    RingElement t1 = ntt_pointwise_mul(x.parts[0], y.parts[1]);
    ring_add_inplace(t1, ntt_pointwise_mul(x.parts[1], y.parts[0]));
    RingElement t2 = ntt_pointwise_mul(x.parts[1], y.parts[1]);

    // Relinearize t2 via per-limb digit decomposition.
    RingElement t2_coeff = ntt_inverse(t2);
    auto ctx = t2_coeff.context();
    RingElement acc_b = RingElement::zero(ctx, L, Domain::Ntt);
    RingElement acc_a = RingElement::zero(ctx, L, Domain::Ntt);
    for (size_t j = 0; j < L; ++j) {
        RingElement digit = RingElement::zero(ctx, L, Domain::Coefficient);
        auto src = t2_coeff.limb(j);
        for (size_t i = 0; i < L; ++i) {
            const uint64_t p = digit.limb_prime(i);
            auto dst = digit.limb(i);
            for (size_t c = 0; c < src.size(); ++c) dst[c] = src[c] % p;
        }
        ntt_forward_inplace(digit);
        ntt_pointwise_mul_acc(acc_b, digit, ek.b[j]);
        ntt_pointwise_mul_acc(acc_a, digit, ek.a[j]);
    }
    ring_add_inplace(t0, acc_b);
    ring_add_inplace(t1, acc_a);

    Ciphertext product;
    product.parts = {std::move(t0), std::move(t1)};
    product.scheme = Scheme::Ckks;
    product.level = x.level;
    product.scale_log2 = x.scale_log2 + y.scale_log2;
    product.params = x.params;
    return rescale(product);
}

}  // namespace hevx
