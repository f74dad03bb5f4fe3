// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_SCHEMES_HPP
#define HEVX_SCHEMES_HPP

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hevx/params.hpp"
#include "hevx/ring.hpp"
#include "hevx/rng.hpp"

namespace hevx {

class SecretKey;
struct KeyBundle;
KeyBundle keygen(const ParamSet& params, Rng& rng, bool allow_insecure);

/// Ternary secret. Only keygen can mint one and there is no wire form for it:
/// the serialization layer accepts public keys, evaluation keys and
/// ciphertexts, nothing else. A party that only sees wire traffic can never
/// hold a SecretKey, which is what keeps the aggregator honest.
class SecretKey {
public:
    const RingElement& s_ntt() const { return s_ntt_; }
    const ParamSet& params() const { return params_; }

private:
    SecretKey(RingElement s_ntt, ParamSet params) : s_ntt_(std::move(s_ntt)), params_(std::move(params)) {}
    RingElement s_ntt_;
    ParamSet params_;
    friend struct KeyBundle;
    friend KeyBundle keygen(const ParamSet&, Rng&, bool);
};

struct PublicKey {
    RingElement b;  // -a*s + f*e, NTT domain
    RingElement a;  // uniform, NTT domain
    ParamSet params;
    bool operator==(const PublicKey&) const = default;
};

/// Key-switching key for s^2 -> s: one (b_j, a_j) pair per modulus limb,
/// gadget = RNS base extension factors.
struct EvalKey {
    std::vector<RingElement> b;
    std::vector<RingElement> a;
    ParamSet params;
    size_t pair_count() const { return b.size(); }
    bool operator==(const EvalKey&) const = default;
};

struct KeyBundle {
    SecretKey secret;
    PublicKey pub;
    std::optional<EvalKey> eval;
};

struct PlainInteger {
    uint64_t value = 0;  // in [0, t)
    bool operator==(const PlainInteger&) const = default;
};
struct PlainRealVector {
    std::vector<double> values;  // length <= n/2
    int32_t scale_log2 = 0;
    bool operator==(const PlainRealVector&) const = default;
};
struct PlainPoly {
    RingElement poly;
    int32_t scale_log2 = 0;
    bool operator==(const PlainPoly&) const = default;
};
using Plaintext = std::variant<PlainInteger, PlainRealVector, PlainPoly>;

struct Ciphertext {
    std::vector<RingElement> parts;  // 2, or 3 transiently after a tensor
    Scheme scheme = Scheme::Bfv;
    int32_t level = 0;       // remaining modulus limbs
    int32_t scale_log2 = 0;  // CKKS only
    ParamSet params;
    bool operator==(const Ciphertext&) const = default;
};

/// Fresh keys. EvalKey is produced only when the parameter set supports a
/// multiplication (levels >= 2). Insecure parameter sets are refused unless
/// allow_insecure is set.
KeyBundle keygen(const ParamSet& params, Rng& rng, bool allow_insecure);
inline KeyBundle keygen(const ParamSet& params, Rng& rng) { return keygen(params, rng, false); }

/// Standard RLWE public-key encryption with the scheme's message placement:
/// BGV noise is carried as t*e, the BFV message as floor(q/t)*m, CKKS embeds
/// the encoded polynomial directly. Integer plaintexts are for BFV/BGV,
/// real vectors / polys for CKKS.
Ciphertext encrypt(const PublicKey& pk, const Plaintext& pt, Rng& rng);

/// Inverts encrypt. BFV/BGV return PlainInteger; CKKS returns the decoded
/// PlainRealVector at the ciphertext's recorded scale. A transient 3-part
/// ciphertext is accepted (c2*s^2 term included) for test purposes.
Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct);

/// Part-wise sum; operands must agree on scheme, level and (CKKS) scale.
Ciphertext he_add(const Ciphertext& a, const Ciphertext& b);

/// CKKS tensor + relinearize + rescale. Consumes one level.
Ciphertext he_mul_ckks(const Ciphertext& a, const Ciphertext& b, const EvalKey& ek);

/// Modswitch: divide parts by the last remaining limb prime, dropping it.
Ciphertext rescale(const Ciphertext& ct);

/// Canonical-embedding CKKS encoding of up to n/2 reals at scale 2^scale_log2.
Plaintext ckks_encode(std::span<const double> values, int32_t scale_log2, const ParamSet& params);
std::vector<double> ckks_decode(const PlainPoly& pt);

/// Constant-coefficient integer encoding for BFV/BGV.
Plaintext int_encode(uint64_t value, const ParamSet& params);
uint64_t int_decode(const Plaintext& pt, const ParamSet& params);

}  // namespace hevx

#endif
