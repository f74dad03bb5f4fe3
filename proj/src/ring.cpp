// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/ring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hevx {

namespace {

inline uint64_t shoup_precompute(uint64_t w, uint64_t p) {
    return static_cast<uint64_t>((static_cast<uint128_t>(w) << 64) / p);
}

// Shoup modular product: x*w mod p given w_shoup = floor(w * 2^64 / p).
// Requires x, w < p and p < 2^63.
inline uint64_t shoup_mul(uint64_t x, uint64_t w, uint64_t w_shoup, uint64_t p) {
    uint64_t hi = static_cast<uint64_t>((static_cast<uint128_t>(x) * w_shoup) >> 64);
    uint64_t r = x * w - hi * p;
    return r >= p ? r - p : r;
}

size_t bit_reverse(size_t v, unsigned bits) {
    size_t r = 0;
    for (unsigned i = 0; i < bits; ++i) {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    return r;
}

unsigned log2_exact(size_t n) {
    unsigned l = 0;
    while ((size_t(1) << l) < n) ++l;
    return l;
}

void check_same_shape(const RingElement& x, const RingElement& y) {
    if (x.degree() != y.degree() || x.limb_count() != y.limb_count())
        throw std::invalid_argument("ring op: mismatched element shapes");
    for (size_t i = 0; i < x.limb_count(); ++i)
        if (x.limb_prime(i) != y.limb_prime(i))
            throw std::invalid_argument("ring op: mismatched modulus chains");
    if (x.domain() != y.domain()) throw std::invalid_argument("ring op: mismatched domains");
}

}  // namespace

PrimeContext::PrimeContext(uint64_t prime, size_t degree_n) : prime_(prime), n_(degree_n) {
    if (!is_power_of_two(degree_n)) throw std::invalid_argument("PrimeContext: n must be a power of two");
    if (prime % (2 * degree_n) != 1) throw std::invalid_argument("PrimeContext: prime != 1 mod 2n");
    const unsigned logn = log2_exact(n_);
    psi_ = primitive_root_2n(prime_, n_);
    const uint64_t psi_inv = inv_mod(psi_, prime_);

    psi_pow_.resize(n_);
    psi_pow_shoup_.resize(n_);
    psi_inv_pow_.resize(n_);
    psi_inv_pow_shoup_.resize(n_);
    uint64_t fwd = 1, inv = 1;
    for (size_t i = 0; i < n_; ++i) {
        size_t r = bit_reverse(i, logn);
        psi_pow_[r] = fwd;
        psi_inv_pow_[r] = inv;
        fwd = mul_mod(fwd, psi_, prime_);
        inv = mul_mod(inv, psi_inv, prime_);
    }
    for (size_t i = 0; i < n_; ++i) {
        psi_pow_shoup_[i] = shoup_precompute(psi_pow_[i], prime_);
        psi_inv_pow_shoup_[i] = shoup_precompute(psi_inv_pow_[i], prime_);
    }
    n_inv_ = inv_mod(static_cast<uint64_t>(n_ % prime_), prime_);
    n_inv_shoup_ = shoup_precompute(n_inv_, prime_);
}

void PrimeContext::forward_ntt(std::span<uint64_t> a) const {
    if (a.size() != n_) throw std::invalid_argument("forward_ntt: bad length");
    const uint64_t p = prime_;
    size_t t = n_;
    for (size_t m = 1; m < n_; m <<= 1) {
        t >>= 1;
        for (size_t i = 0; i < m; ++i) {
            const size_t j1 = 2 * i * t;
            const uint64_t s = psi_pow_[m + i];
            const uint64_t sq = psi_pow_shoup_[m + i];
            for (size_t j = j1; j < j1 + t; ++j) {
                const uint64_t u = a[j];
                const uint64_t v = shoup_mul(a[j + t], s, sq, p);
                a[j] = add_mod(u, v, p);
                a[j + t] = sub_mod(u, v, p);
            }
        }
    }
}

void PrimeContext::inverse_ntt(std::span<uint64_t> a) const {
    if (a.size() != n_) throw std::invalid_argument("inverse_ntt: bad length");
    const uint64_t p = prime_;
    size_t t = 1;
    for (size_t m = n_; m > 1; m >>= 1) {
        const size_t h = m >> 1;
        size_t j1 = 0;
        for (size_t i = 0; i < h; ++i) {
            const uint64_t s = psi_inv_pow_[h + i];
            const uint64_t sq = psi_inv_pow_shoup_[h + i];
            for (size_t j = j1; j < j1 + t; ++j) {
                const uint64_t u = a[j];
                const uint64_t v = a[j + t];
                a[j] = add_mod(u, v, p);
                a[j + t] = shoup_mul(sub_mod(u, v, p), s, sq, p);
            }
            j1 += 2 * t;
        }
        t <<= 1;
    }
    for (size_t j = 0; j < n_; ++j) a[j] = shoup_mul(a[j], n_inv_, n_inv_shoup_, p);
}

RingContext::RingContext(uint32_t degree_n, std::span<const uint64_t> limbs) : n_(degree_n) {
    primes_.assign(limbs.begin(), limbs.end());
    prime_ctx_.reserve(primes_.size());
    for (uint64_t p : primes_) prime_ctx_.push_back(std::make_unique<PrimeContext>(p, n_));
}

std::shared_ptr<const RingContext> RingContext::get(uint32_t degree_n, std::span<const uint64_t> limbs) {
    using Key = std::pair<uint32_t, std::vector<uint64_t>>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const RingContext>> cache;
    Key key{degree_n, {limbs.begin(), limbs.end()}};
    std::scoped_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ctx = std::shared_ptr<const RingContext>(new RingContext(degree_n, limbs));
    cache.emplace(std::move(key), ctx);
    return ctx;
}

std::shared_ptr<const RingContext> RingContext::get(const ParamSet& ps) {
    return get(ps.ring_degree_n, ps.modulus_limbs);
}

uint128_t RingContext::modulus_product(size_t limbs) const {
    if (limbs > primes_.size()) throw std::invalid_argument("modulus_product: too many limbs");
    uint128_t q = 1;
    for (size_t i = 0; i < limbs; ++i) q *= primes_[i];
    return q;
}

RingElement RingElement::zero(RingContextPtr ctx, size_t limb_count, Domain domain) {
    if (!ctx || limb_count == 0 || limb_count > ctx->limb_count())
        throw std::invalid_argument("RingElement::zero: bad context/limb count");
    RingElement e;
    e.ctx_ = std::move(ctx);
    e.limbs_.assign(limb_count, std::vector<uint64_t>(e.ctx_->degree(), 0));
    e.domain_ = domain;
    return e;
}

bool RingElement::operator==(const RingElement& other) const {
    if (domain_ != other.domain_ || limbs_.size() != other.limbs_.size()) return false;
    if ((ctx_ == nullptr) != (other.ctx_ == nullptr)) return false;
    if (ctx_ && (ctx_->degree() != other.ctx_->degree())) return false;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        if (limb_prime(i) != other.limb_prime(i)) return false;
        if (limbs_[i] != other.limbs_[i]) return false;
    }
    return true;
}

bool RingElement::is_zero() const {
    for (const auto& l : limbs_)
        for (uint64_t c : l)
            if (c != 0) return false;
    return true;
}

RingElement RingElement::truncated(size_t keep) const {
    if (keep == 0 || keep > limbs_.size()) throw std::invalid_argument("truncated: bad limb count");
    RingElement e;
    e.ctx_ = ctx_;
    e.domain_ = domain_;
    e.limbs_.assign(limbs_.begin(), limbs_.begin() + keep);
    return e;
}

RingElement ntt_forward(const RingElement& x) {
    RingElement out = x;
    ntt_forward_inplace(out);
    return out;
}

RingElement ntt_inverse(const RingElement& x) {
    RingElement out = x;
    ntt_inverse_inplace(out);
    return out;
}

void ntt_forward_inplace(RingElement& x) {
    if (x.domain() != Domain::Coefficient) throw std::invalid_argument("ntt_forward: element already in NTT domain");
    for (size_t i = 0; i < x.limb_count(); ++i) x.context()->prime_context(i).forward_ntt(x.limb(i));
    x.set_domain(Domain::Ntt);
}

void ntt_inverse_inplace(RingElement& x) {
    if (x.domain() != Domain::Ntt) throw std::invalid_argument("ntt_inverse: element not in NTT domain");
    for (size_t i = 0; i < x.limb_count(); ++i) x.context()->prime_context(i).inverse_ntt(x.limb(i));
    x.set_domain(Domain::Coefficient);
}

RingElement ring_add(const RingElement& x, const RingElement& y) {
    RingElement out = x;
    ring_add_inplace(out, y);
    return out;
}

void ring_add_inplace(RingElement& x, const RingElement& y) {
    check_same_shape(x, y);
    for (size_t i = 0; i < x.limb_count(); ++i) {
        const uint64_t p = x.limb_prime(i);
        auto xs = x.limb(i);
        auto ys = y.limb(i);
        for (size_t j = 0; j < xs.size(); ++j) xs[j] = add_mod(xs[j], ys[j], p);
    }
}

RingElement ring_sub(const RingElement& x, const RingElement& y) {
    RingElement out = x;
    ring_sub_inplace(out, y);
    return out;
}

void ring_sub_inplace(RingElement& x, const RingElement& y) {
    check_same_shape(x, y);
    for (size_t i = 0; i < x.limb_count(); ++i) {
        const uint64_t p = x.limb_prime(i);
        auto xs = x.limb(i);
        auto ys = y.limb(i);
        for (size_t j = 0; j < xs.size(); ++j) xs[j] = sub_mod(xs[j], ys[j], p);
    }
}

RingElement ring_neg(const RingElement& x) {
    RingElement out = x;
    for (size_t i = 0; i < out.limb_count(); ++i) {
        const uint64_t p = out.limb_prime(i);
        for (uint64_t& c : out.limb(i)) c = neg_mod(c, p);
    }
    return out;
}

RingElement ntt_pointwise_mul(const RingElement& x, const RingElement& y) {
    check_same_shape(x, y);
    if (x.domain() != Domain::Ntt) throw std::invalid_argument("pointwise mul requires NTT domain");
    RingElement out = x;
    for (size_t i = 0; i < out.limb_count(); ++i) {
        const uint64_t p = out.limb_prime(i);
        auto os = out.limb(i);
        auto ys = y.limb(i);
        for (size_t j = 0; j < os.size(); ++j) os[j] = mul_mod(os[j], ys[j], p);
    }
    return out;
}

void ntt_pointwise_mul_acc(RingElement& acc, const RingElement& x, const RingElement& y) {
    check_same_shape(x, y);
    check_same_shape(acc, x);
    if (x.domain() != Domain::Ntt) throw std::invalid_argument("pointwise mul requires NTT domain");
    for (size_t i = 0; i < acc.limb_count(); ++i) {
        const uint64_t p = acc.limb_prime(i);
        auto as = acc.limb(i);
        auto xs = x.limb(i);
        auto ys = y.limb(i);
        for (size_t j = 0; j < as.size(); ++j)
            as[j] = add_mod(as[j], mul_mod(xs[j], ys[j], p), p);
    }
}

RingElement scalar_mul(const RingElement& x, std::span<const uint64_t> scalar_per_limb) {
    if (scalar_per_limb.size() != x.limb_count()) throw std::invalid_argument("scalar_mul: limb mismatch");
    RingElement out = x;
    for (size_t i = 0; i < out.limb_count(); ++i) {
        const uint64_t p = out.limb_prime(i);
        const uint64_t s = scalar_per_limb[i] % p;
        for (uint64_t& c : out.limb(i)) c = mul_mod(c, s, p);
    }
    return out;
}

RingElement ring_mul(const RingElement& x, const RingElement& y) {
    check_same_shape(x, y);
    if (x.domain() == Domain::Ntt) return ntt_pointwise_mul(x, y);
    RingElement xf = ntt_forward(x);
    RingElement yf = ntt_forward(y);
    RingElement prod = ntt_pointwise_mul(xf, yf);
    ntt_inverse_inplace(prod);
    return prod;
}

std::vector<int128_t> crt_reconstruct(const RingElement& x) {
    if (x.domain() != Domain::Coefficient) throw std::invalid_argument("crt_reconstruct: coefficient domain required");
    const size_t n = x.degree();
    const size_t L = x.limb_count();
    const auto& primes = x.context()->primes();

    // q and the per-limb CRT factors q_hat_i = q/p_i, c_i = (q_hat_i)^-1 mod p_i.
    uint128_t q = 1;
    for (size_t i = 0; i < L; ++i) q *= primes[i];
    std::vector<uint128_t> q_hat(L);
    std::vector<uint64_t> q_hat_inv(L);
    for (size_t i = 0; i < L; ++i) {
        q_hat[i] = q / primes[i];
        q_hat_inv[i] = inv_mod(static_cast<uint64_t>(q_hat[i] % primes[i]), primes[i]);
    }

    std::vector<int128_t> out(n);
    const uint128_t half = q >> 1;
    for (size_t j = 0; j < n; ++j) {
        uint128_t acc = 0;
        for (size_t i = 0; i < L; ++i) {
            uint64_t d = mul_mod(x.limb(i)[j], q_hat_inv[i], primes[i]);
            acc += (q_hat[i] % q) * d % q;
            if (acc >= q) acc -= q;
        }
        // centered representative in (-q/2, q/2]
        if (acc > half) out[j] = static_cast<int128_t>(acc) - static_cast<int128_t>(q);
        else out[j] = static_cast<int128_t>(acc);
    }
    return out;
}

RingElement rns_decompose(std::span<const int128_t> centered, RingContextPtr ctx, size_t limb_count,
                          Domain domain) {
    RingElement out = RingElement::zero(std::move(ctx), limb_count, Domain::Coefficient);
    if (centered.size() != out.degree()) throw std::invalid_argument("rns_decompose: bad length");
    for (size_t i = 0; i < limb_count; ++i) {
        const int128_t p = static_cast<int128_t>(out.limb_prime(i));
        auto limb = out.limb(i);
        for (size_t j = 0; j < centered.size(); ++j) {
            int128_t r = centered[j] % p;
            if (r < 0) r += p;
            limb[j] = static_cast<uint64_t>(r);
        }
    }
    if (domain == Domain::Ntt) ntt_forward_inplace(out);
    return out;
}

RingElement sample_uniform(RingContextPtr ctx, size_t limb_count, Rng& rng) {
    RingElement e = RingElement::zero(std::move(ctx), limb_count, Domain::Coefficient);
    for (size_t i = 0; i < limb_count; ++i) {
        const uint64_t p = e.limb_prime(i);
        for (uint64_t& c : e.limb(i)) c = rng.uniform_below(p);
    }
    return e;
}

namespace {

// Small signed integer broadcast into every limb.
void set_small_coeff(RingElement& e, size_t j, int v) {
    for (size_t i = 0; i < e.limb_count(); ++i) {
        const uint64_t p = e.limb_prime(i);
        e.limb(i)[j] = v >= 0 ? static_cast<uint64_t>(v) % p
                              : p - static_cast<uint64_t>(-v) % p;
    }
}

// Cumulative table over magnitudes 0..ceil(6*sigma) for the centered discrete
// Gaussian, folded so one uniform draw picks the magnitude.
struct GaussianTable {
    std::vector<double> cum;
    explicit GaussianTable(double sigma) {
        const int kmax = static_cast<int>(std::ceil(6.0 * sigma));
        std::vector<double> w(kmax + 1);
        double total = 0;
        for (int k = 0; k <= kmax; ++k) {
            double rho = std::exp(-0.5 * (double(k) * k) / (sigma * sigma));
            w[k] = (k == 0) ? rho : 2.0 * rho;
            total += w[k];
        }
        cum.resize(kmax + 1);
        double run = 0;
        for (int k = 0; k <= kmax; ++k) {
            run += w[k] / total;
            cum[k] = run;
        }
        cum.back() = 1.0;
    }
};

const GaussianTable& gaussian_table(double sigma) {
    static std::mutex mu;
    static std::map<double, GaussianTable> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(sigma);
    if (it == cache.end()) it = cache.emplace(sigma, GaussianTable(sigma)).first;
    return it->second;
}

}  // namespace

int sample_gaussian_int(double sigma, Rng& rng) {
    if (sigma <= 0) throw std::invalid_argument("sample_gaussian_int: sigma must be positive");
    const auto& tbl = gaussian_table(sigma);
    const double u = rng.uniform_real();
    size_t k = 0;
    while (k + 1 < tbl.cum.size() && u > tbl.cum[k]) ++k;
    if (k == 0) return 0;
    return rng.bernoulli(0.5) ? static_cast<int>(k) : -static_cast<int>(k);
}

RingElement sample_ternary(RingContextPtr ctx, size_t limb_count, Rng& rng) {
    RingElement e = RingElement::zero(std::move(ctx), limb_count, Domain::Coefficient);
    for (size_t j = 0; j < e.degree(); ++j)
        set_small_coeff(e, j, static_cast<int>(rng.uniform_below(3)) - 1);
    return e;
}

RingElement sample_error(RingContextPtr ctx, size_t limb_count, double sigma, Rng& rng) {
    RingElement e = RingElement::zero(std::move(ctx), limb_count, Domain::Coefficient);
    for (size_t j = 0; j < e.degree(); ++j)
        set_small_coeff(e, j, sample_gaussian_int(sigma, rng));
    return e;
}

RingElement sample_uniform(const ParamSet& ps, Rng& rng) {
    return sample_uniform(RingContext::get(ps), ps.limb_count(), rng);
}

RingElement sample_ternary(const ParamSet& ps, Rng& rng) {
    return sample_ternary(RingContext::get(ps), ps.limb_count(), rng);
}

RingElement sample_error(const ParamSet& ps, Rng& rng) {
    return sample_error(RingContext::get(ps), ps.limb_count(), ps.error_stddev_sigma, rng);
}

}  // namespace hevx
