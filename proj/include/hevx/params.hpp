// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_PARAMS_HPP
#define HEVX_PARAMS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace hevx {

enum class Scheme : uint8_t { Bfv = 0, Bgv = 1, Ckks = 2 };

const char* scheme_name(Scheme s);

/// Ring-LWE parameter set. The secure presets reproduce the 128-bit rows;
/// the ciphertext modulus q is carried as a chain of word-sized NTT-friendly
/// primes (RNS limbs) whose bit lengths sum to log2(q).
struct ParamSet {
    Scheme scheme = Scheme::Bfv;
    uint32_t ring_degree_n = 0;
    std::vector<uint64_t> modulus_limbs;   // distinct primes, each ≡ 1 (mod 2n)
    uint64_t plaintext_modulus_t = 0;      // BFV/BGV only
    int32_t scale_log2 = 0;                // CKKS only, log2 of Δ
    int32_t levels = 1;                    // multiplicative depth + 1
    double error_stddev_sigma = 3.19;
    bool secure = false;

    size_t limb_count() const { return modulus_limbs.size(); }
    /// Sum of limb bit lengths; this is the log2(q) the presets are gated on.
    unsigned log2_q() const;
    bool operator==(const ParamSet&) const = default;
};

/// Table-row presets. with_multiplication selects the depth-1 CKKS chain and
/// is rejected for BFV/BGV (no multiplicative row exists for them).
ParamSet preset(Scheme scheme, bool with_multiplication);

/// Small insecure parameters (n = 16) for oracle and exhaustive testing.
ParamSet toy_preset(Scheme scheme);

/// Resolve a CLI preset id: bfv-add, bgv-add, ckks-add, ckks-mul,
/// toy-bfv, toy-bgv, toy-ckks. Throws std::invalid_argument on unknown ids.
ParamSet preset_by_id(const std::string& id);

/// All preset ids accepted by preset_by_id, in display order.
const std::vector<std::string>& preset_ids();

/// Empty result means the set is valid. secure=true additionally requires an
/// exact match with one of the published parameter rows.
std::vector<std::string> validate(const ParamSet& ps);

}  // namespace hevx

#endif
