// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_WIRE_HPP
#define HEVX_WIRE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hevx/schemes.hpp"

namespace hevx {

using Bytes = std::vector<uint8_t>;

class WireError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reassembly failure carrying the indices that never arrived.
class ReassemblyError : public WireError {
public:
    ReassemblyError(const std::string& what, std::vector<uint32_t> missing_indices)
        : WireError(what), missing(std::move(missing_indices)) {}
    std::vector<uint32_t> missing;
};

enum class BlobKind : uint8_t { PublicKey = 0, EvalKey = 1, Ciphertext = 2, Baseline = 3 };

/// A serialized message. body is the complete self-describing byte string
/// (for HE objects it starts with the "HEVX" header); kind/scheme mirror the
/// header for convenience. Baseline blobs carry arbitrary payloads.
struct WireBlob {
    BlobKind kind = BlobKind::Baseline;
    Scheme scheme = Scheme::Bfv;
    Bytes body;
    bool operator==(const WireBlob&) const = default;
};

WireBlob serialize(const PublicKey& pk);
WireBlob serialize(const EvalKey& ek);
WireBlob serialize(const Ciphertext& ct);

using WireObject = std::variant<PublicKey, EvalKey, Ciphertext>;

/// Parse a blob back into the object it encodes. Throws WireError on any
/// malformed input (bad magic/version, truncated body, residue >= its prime).
WireObject deserialize(const WireBlob& blob);

WireBlob make_baseline_blob(Bytes payload);

/// Datagram unit: 8-byte header (big-endian seq_index, total_count) plus at
/// most mtu-8 payload bytes.
struct Fragment {
    uint32_t seq_index = 0;
    uint32_t total_count = 0;
    Bytes payload;
    bool operator==(const Fragment&) const = default;
};

inline constexpr size_t kFragmentHeaderSize = 8;

std::vector<Fragment> fragment(const WireBlob& blob, size_t mtu);
Bytes encode_fragment(const Fragment& f);
Fragment decode_fragment(std::span<const uint8_t> datagram);

/// Order-independent, duplicate-tolerant reconstruction. Throws
/// ReassemblyError when indices are missing or totals disagree.
WireBlob reassemble(std::span<const Fragment> fragments);

/// Incremental reassembly for a receive loop.
class Reassembler {
public:
    /// Returns true when the fragment was new (not a duplicate).
    bool insert(const Fragment& f);
    bool complete() const { return total_ != 0 && received_ == total_; }
    size_t received_count() const { return received_; }
    std::vector<uint32_t> missing() const;
    std::vector<uint32_t> received_indices() const;
    WireBlob take();

private:
    uint32_t total_ = 0;
    size_t received_ = 0;
    std::vector<bool> seen_;
    std::vector<Bytes> parts_;
};

/// Expected fragment count for a body of `size` bytes: ceil(size / (mtu - 8)).
size_t fragment_count_for(size_t size, size_t mtu);

}  // namespace hevx

#endif
