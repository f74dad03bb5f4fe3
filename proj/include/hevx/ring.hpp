// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_RING_HPP
#define HEVX_RING_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hevx/numtheory.hpp"
#include "hevx/params.hpp"
#include "hevx/rng.hpp"

namespace hevx {

class Rng;

enum class Domain : uint8_t { Coefficient = 0, Ntt = 1 };

/// Per-prime negacyclic NTT machinery: the 2n-th root psi, bit-reversed
/// twiddle tables, and their Shoup companions for fast modular products.
/// Immutable after construction and shareable across threads.
class PrimeContext {
public:
    PrimeContext(uint64_t prime, size_t degree_n);

    uint64_t prime() const { return prime_; }
    size_t degree() const { return n_; }
    uint64_t psi() const { return psi_; }

    /// In-place negacyclic transforms over one residue vector of length n.
    void forward_ntt(std::span<uint64_t> coeffs) const;
    void inverse_ntt(std::span<uint64_t> coeffs) const;

private:
    uint64_t prime_;
    size_t n_;
    uint64_t psi_;
    std::vector<uint64_t> psi_pow_, psi_pow_shoup_;          // psi^brv(i)
    std::vector<uint64_t> psi_inv_pow_, psi_inv_pow_shoup_;  // psi^-brv(i)
    uint64_t n_inv_, n_inv_shoup_;
};

/// NTT contexts for a full modulus chain. Cached per (n, limbs) so repeated
/// trials do not rebuild twiddle tables.
class RingContext {
public:
    static std::shared_ptr<const RingContext> get(uint32_t degree_n, std::span<const uint64_t> limbs);
    static std::shared_ptr<const RingContext> get(const ParamSet& ps);

    size_t degree() const { return n_; }
    size_t limb_count() const { return primes_.size(); }
    const std::vector<uint64_t>& primes() const { return primes_; }
    const PrimeContext& prime_context(size_t i) const { return *prime_ctx_[i]; }

    /// Product of the first `limbs` primes. Fits 128 bits for every supported
    /// chain (log2(q) <= 110).
    uint128_t modulus_product(size_t limbs) const;

private:
    RingContext(uint32_t degree_n, std::span<const uint64_t> limbs);
    size_t n_;
    std::vector<uint64_t> primes_;
    std::vector<std::unique_ptr<PrimeContext>> prime_ctx_;
};

using RingContextPtr = std::shared_ptr<const RingContext>;

/// Element of R_q = Z_q[x]/(x^n + 1) in RNS form: one residue vector per
/// modulus limb, each entry reduced below its prime. Value semantics.
class RingElement {
public:
    RingElement() = default;
    static RingElement zero(RingContextPtr ctx, size_t limb_count, Domain domain);

    Domain domain() const { return domain_; }
    void set_domain(Domain d) { domain_ = d; }
    size_t degree() const { return ctx_ ? ctx_->degree() : 0; }
    size_t limb_count() const { return limbs_.size(); }
    const RingContextPtr& context() const { return ctx_; }

    std::span<const uint64_t> limb(size_t i) const { return limbs_[i]; }
    std::span<uint64_t> limb(size_t i) { return limbs_[i]; }
    uint64_t limb_prime(size_t i) const { return ctx_->primes()[i]; }

    bool operator==(const RingElement& other) const;
    bool is_zero() const;

    /// Copy restricted to the first `keep` limbs (level drop).
    RingElement truncated(size_t keep) const;

private:
    RingContextPtr ctx_;
    std::vector<std::vector<uint64_t>> limbs_;
    Domain domain_ = Domain::Coefficient;
};

/// Domain flips. Exact inverses of each other; throw on wrong input domain.
RingElement ntt_forward(const RingElement& x);
RingElement ntt_inverse(const RingElement& x);
void ntt_forward_inplace(RingElement& x);
void ntt_inverse_inplace(RingElement& x);

/// Coefficient-wise modular arithmetic; operands must share shape and domain.
RingElement ring_add(const RingElement& x, const RingElement& y);
RingElement ring_sub(const RingElement& x, const RingElement& y);
RingElement ring_neg(const RingElement& x);
void ring_add_inplace(RingElement& x, const RingElement& y);
void ring_sub_inplace(RingElement& x, const RingElement& y);

/// Negacyclic product x·y mod (x^n + 1, q). Coefficient operands are
/// transformed through the NTT and returned in Coefficient domain; NTT
/// operands multiply pointwise and stay in NTT domain.
RingElement ring_mul(const RingElement& x, const RingElement& y);

/// Pointwise product of two NTT-domain elements.
RingElement ntt_pointwise_mul(const RingElement& x, const RingElement& y);
void ntt_pointwise_mul_acc(RingElement& acc, const RingElement& x, const RingElement& y);

/// Multiply every coefficient by a per-limb scalar (scalar given mod each limb).
RingElement scalar_mul(const RingElement& x, std::span<const uint64_t> scalar_per_limb);

/// O(n^2) test oracle: the same negacyclic product computed over CRT-lifted
/// big-integer coefficients, with no NTT anywhere on the path.
RingElement schoolbook_negacyclic_mul(const RingElement& x, const RingElement& y);

/// Centered lift: coefficient i is the unique integer in (-q/2, q/2] matching
/// every limb residue. Requires Coefficient domain.
std::vector<int128_t> crt_reconstruct(const RingElement& x);

/// Inverse of crt_reconstruct: reduce centered integers into RNS residues.
RingElement rns_decompose(std::span<const int128_t> centered, RingContextPtr ctx, size_t limb_count,
                          Domain domain = Domain::Coefficient);

/// Samplers. All return Coefficient-domain elements and are deterministic
/// under a fixed Rng seed.
RingElement sample_uniform(RingContextPtr ctx, size_t limb_count, Rng& rng);
RingElement sample_ternary(RingContextPtr ctx, size_t limb_count, Rng& rng);
RingElement sample_error(RingContextPtr ctx, size_t limb_count, double sigma, Rng& rng);

RingElement sample_uniform(const ParamSet& ps, Rng& rng);
RingElement sample_ternary(const ParamSet& ps, Rng& rng);
RingElement sample_error(const ParamSet& ps, Rng& rng);

/// Centered discrete Gaussian integer, width sigma, truncated at 6*sigma.
int sample_gaussian_int(double sigma, Rng& rng);

}  // namespace hevx

#endif
