// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/params.hpp"

#include <set>
#include <stdexcept>

#include "hevx/numtheory.hpp"

namespace hevx {

namespace {

// 53-bit NTT primes, largest first, p ≡ 1 (mod 2n) for the row's ring degree.
constexpr uint64_t kBfvLimbs[] = {9007199254429697ull, 9007199254364161ull};    // mod 8192
constexpr uint64_t kBgvLimbs[] = {9007199254429697ull, 9007199254364161ull};    // mod 16384
constexpr uint64_t kCkksAddLimbs[] = {9007199253921793ull, 9007199252840449ull};  // mod 32768
// Depth-1 CKKS chain: two 34-bit base limbs plus a 38-bit rescale limb kept
// last so one rescale drops a near-Δ prime. Bit lengths still sum to 106.
constexpr uint64_t kCkksMulLimbs[] = {17179672577ull, 17179410433ull, 274877153281ull};

// Toy chains for n = 16 (all primes ≡ 1 mod 32).
constexpr uint64_t kToyIntLimbs[] = {12289ull, 40961ull};
constexpr uint64_t kToyCkksLimbs[] = {40961ull, 61441ull, 65537ull};

constexpr uint64_t kPlaintextModulus = 65537;
constexpr double kSigma = 3.19;

ParamSet make(Scheme scheme, uint32_t n, std::vector<uint64_t> limbs, uint64_t t,
              int32_t scale_log2, int32_t levels, bool secure) {
    ParamSet ps;
    ps.scheme = scheme;
    ps.ring_degree_n = n;
    ps.modulus_limbs = std::move(limbs);
    ps.plaintext_modulus_t = t;
    ps.scale_log2 = scale_log2;
    ps.levels = levels;
    ps.error_stddev_sigma = kSigma;
    ps.secure = secure;
    return ps;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Bfv: return "BFV";
        case Scheme::Bgv: return "BGV";
        case Scheme::Ckks: return "CKKS";
    }
    return "?";
}

unsigned ParamSet::log2_q() const {
    unsigned sum = 0;
    for (uint64_t p : modulus_limbs) sum += bit_length(p);
    return sum;
}

ParamSet preset(Scheme scheme, bool with_multiplication) {
    switch (scheme) {
        case Scheme::Bfv:
            if (with_multiplication) throw std::invalid_argument("no multiplicative BFV parameter row");
            return make(Scheme::Bfv, 4096, {std::begin(kBfvLimbs), std::end(kBfvLimbs)},
                        kPlaintextModulus, 0, 1, true);
        case Scheme::Bgv:
            if (with_multiplication) throw std::invalid_argument("no multiplicative BGV parameter row");
            return make(Scheme::Bgv, 8192, {std::begin(kBgvLimbs), std::end(kBgvLimbs)},
                        kPlaintextModulus, 0, 1, true);
        case Scheme::Ckks:
            if (with_multiplication) {
                return make(Scheme::Ckks, 16384, {std::begin(kCkksMulLimbs), std::end(kCkksMulLimbs)},
                            0, 38, 2, true);
            }
            return make(Scheme::Ckks, 16384, {std::begin(kCkksAddLimbs), std::end(kCkksAddLimbs)},
                        0, 38, 1, true);
    }
    throw std::invalid_argument("unknown scheme");
}

ParamSet toy_preset(Scheme scheme) {
    switch (scheme) {
        case Scheme::Bfv:
            return make(Scheme::Bfv, 16, {std::begin(kToyIntLimbs), std::end(kToyIntLimbs)}, 17, 0, 1, false);
        case Scheme::Bgv:
            return make(Scheme::Bgv, 16, {std::begin(kToyIntLimbs), std::end(kToyIntLimbs)}, 17, 0, 1, false);
        case Scheme::Ckks:
            return make(Scheme::Ckks, 16, {std::begin(kToyCkksLimbs), std::end(kToyCkksLimbs)}, 0, 16, 2, false);
    }
    throw std::invalid_argument("unknown scheme");
}

ParamSet preset_by_id(const std::string& id) {
    if (id == "bfv-add") return preset(Scheme::Bfv, false);
    if (id == "bgv-add") return preset(Scheme::Bgv, false);
    if (id == "ckks-add") return preset(Scheme::Ckks, false);
    if (id == "ckks-mul") return preset(Scheme::Ckks, true);
    if (id == "toy-bfv") return toy_preset(Scheme::Bfv);
    if (id == "toy-bgv") return toy_preset(Scheme::Bgv);
    if (id == "toy-ckks") return toy_preset(Scheme::Ckks);
    throw std::invalid_argument("unknown scheme id: " + id);
}

const std::vector<std::string>& preset_ids() {
    static const std::vector<std::string> ids = {"bfv-add",  "bgv-add", "ckks-add", "ckks-mul",
                                                 "toy-bfv",  "toy-bgv", "toy-ckks"};
    return ids;
}

std::vector<std::string> validate(const ParamSet& ps) {
    std::vector<std::string> bad;
    if (!is_power_of_two(ps.ring_degree_n)) bad.push_back("ring_degree_n is not a power of two");
    if (ps.modulus_limbs.empty()) bad.push_back("modulus chain is empty");

    std::set<uint64_t> distinct(ps.modulus_limbs.begin(), ps.modulus_limbs.end());
    if (distinct.size() != ps.modulus_limbs.size()) bad.push_back("modulus limbs are not distinct");

    const uint64_t two_n = 2 * static_cast<uint64_t>(ps.ring_degree_n);
    for (uint64_t p : ps.modulus_limbs) {
        if (!is_prime_u64(p)) bad.push_back("limb " + std::to_string(p) + " is not prime");
        else if (two_n != 0 && p % two_n != 1)
            bad.push_back("limb " + std::to_string(p) + " != 1 mod 2n");
    }

    if (ps.levels < 1 || ps.levels > 2) bad.push_back("levels must be 1 or 2");
    if (ps.levels == 2 && ps.scheme != Scheme::Ckks) bad.push_back("levels=2 is CKKS-only");
    if (ps.error_stddev_sigma <= 0) bad.push_back("error_stddev_sigma must be positive");

    if (ps.scheme != Scheme::Ckks) {
        if (ps.plaintext_modulus_t < 2) bad.push_back("plaintext modulus must be >= 2");
        if (ps.secure && ps.plaintext_modulus_t != kPlaintextModulus)
            bad.push_back("secure BFV/BGV presets require t = 65537");
    }

    if (ps.secure) {
        unsigned lq = ps.log2_q();
        if (lq < 104 || lq > 110) bad.push_back("log2(q) = " + std::to_string(lq) + " outside [104, 110]");
        // Exact row gate: (n, log2(q), t or Δ, levels).
        bool row_match = false;
        switch (ps.scheme) {
            case Scheme::Bfv:
                row_match = ps.ring_degree_n == 4096 && lq == 106 &&
                            ps.plaintext_modulus_t == kPlaintextModulus && ps.levels == 1;
                break;
            case Scheme::Bgv:
                row_match = ps.ring_degree_n == 8192 && lq == 106 &&
                            ps.plaintext_modulus_t == kPlaintextModulus && ps.levels == 1;
                break;
            case Scheme::Ckks:
                row_match = ps.ring_degree_n == 16384 && lq == 106 && ps.scale_log2 == 38 &&
                            (ps.levels == 1 || ps.levels == 2);
                break;
        }
        if (!row_match) bad.push_back("secure=true but parameters match no published 128-bit row");
    }
    return bad;
}

}  // namespace hevx
