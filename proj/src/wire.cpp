// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0
//
// Byte layouts are normative and mirrored in wire-format.md. All integers are
// little-endian except the fragment header, which is big-endian.

#include "hevx/wire.hpp"

#include <algorithm>
#include <cstring>

#include "hevx/numtheory.hpp"

namespace hevx {

namespace {

constexpr uint8_t kMagic[4] = {'H', 'E', 'V', 'X'};
constexpr uint8_t kVersion = 1;
constexpr size_t kFixedHeadBytes = 48;  // header size excluding the prime list

void put_u16(Bytes& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(Bytes& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint16_t get_u16(std::span<const uint8_t> in, size_t off) {
    return static_cast<uint16_t>(in[off]) | static_cast<uint16_t>(in[off + 1]) << 8;
}

uint32_t get_u32(std::span<const uint8_t> in, size_t off) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | in[off + i];
    return v;
}

uint64_t get_u64(std::span<const uint8_t> in, size_t off) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | in[off + i];
    return v;
}

struct Header {
    BlobKind kind;
    Scheme scheme;
    uint8_t parts;
    uint8_t limb_count;
    uint8_t level;
    int16_t scale_log2;
    uint32_t n;
    std::vector<uint64_t> primes;
    uint64_t body_length;
    Domain domain;
    uint8_t levels;
    bool secure;
    double sigma;
    uint64_t plaintext_modulus;
};

size_t header_size(size_t limb_count) { return kFixedHeadBytes + 8 * limb_count; }

Bytes build_blob(BlobKind kind, const ParamSet& ps, std::span<const RingElement> elements,
                 uint8_t level, int16_t scale_log2) {
    const RingElement& first = elements[0];
    const size_t L = first.limb_count();
    const size_t n = first.degree();
    const size_t total = header_size(L) + elements.size() * L * n * 8;

    Bytes out;
    out.reserve(total);
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    out.push_back(kVersion);
    out.push_back(static_cast<uint8_t>(kind));
    out.push_back(static_cast<uint8_t>(ps.scheme));
    out.push_back(static_cast<uint8_t>(elements.size()));
    out.push_back(static_cast<uint8_t>(L));
    out.push_back(level);
    put_u16(out, static_cast<uint16_t>(scale_log2));
    put_u32(out, static_cast<uint32_t>(n));
    for (size_t i = 0; i < L; ++i) put_u64(out, first.limb_prime(i));
    put_u64(out, total);
    out.push_back(static_cast<uint8_t>(first.domain()));
    out.push_back(static_cast<uint8_t>(ps.levels));
    out.push_back(ps.secure ? 1 : 0);
    out.push_back(0);
    put_u32(out, 0);
    uint64_t sigma_bits;
    static_assert(sizeof(double) == sizeof(uint64_t));
    std::memcpy(&sigma_bits, &ps.error_stddev_sigma, 8);
    put_u64(out, sigma_bits);
    put_u64(out, ps.plaintext_modulus_t);

    // limb-major, then part-major, then coefficient
    for (size_t limb = 0; limb < L; ++limb)
        for (const RingElement& el : elements)
            for (uint64_t c : el.limb(limb)) put_u64(out, c);

    return out;
}

Header parse_header(std::span<const uint8_t> body) {
    if (body.size() < kFixedHeadBytes) throw WireError("blob too short for header");
    if (!std::equal(std::begin(kMagic), std::end(kMagic), body.begin())) throw WireError("bad magic");
    if (body[4] != kVersion) throw WireError("unsupported wire version");
    Header h{};
    if (body[5] > 3) throw WireError("unknown blob kind");
    h.kind = static_cast<BlobKind>(body[5]);
    if (body[6] > 2) throw WireError("unknown scheme tag");
    h.scheme = static_cast<Scheme>(body[6]);
    h.parts = body[7];
    h.limb_count = body[8];
    h.level = body[9];
    h.scale_log2 = static_cast<int16_t>(get_u16(body, 10));
    h.n = get_u32(body, 12);
    if (h.limb_count == 0 || h.parts == 0) throw WireError("empty part/limb counts");
    if (!is_power_of_two(h.n)) throw WireError("ring degree is not a power of two");
    const size_t hs = header_size(h.limb_count);
    if (body.size() < hs) throw WireError("blob too short for prime list");
    for (size_t i = 0; i < h.limb_count; ++i) h.primes.push_back(get_u64(body, 16 + 8 * i));
    const size_t off = 16 + 8 * size_t(h.limb_count);
    h.body_length = get_u64(body, off);
    const uint8_t dom = body[off + 8];
    if (dom > 1) throw WireError("unknown coefficient domain");
    h.domain = static_cast<Domain>(dom);
    h.levels = body[off + 9];
    h.secure = body[off + 10] != 0;
    uint64_t sigma_bits = get_u64(body, off + 16);
    std::memcpy(&h.sigma, &sigma_bits, 8);
    h.plaintext_modulus = get_u64(body, off + 24);

    const size_t expected = hs + size_t(h.parts) * h.limb_count * h.n * 8;
    if (h.body_length != expected) throw WireError("header body length disagrees with geometry");
    if (body.size() != expected) throw WireError("truncated or oversized blob body");
    return h;
}

std::vector<RingElement> parse_elements(std::span<const uint8_t> body, const Header& h) {
    auto ctx = RingContext::get(h.n, h.primes);
    std::vector<RingElement> elements;
    elements.reserve(h.parts);
    for (size_t p = 0; p < h.parts; ++p)
        elements.push_back(RingElement::zero(ctx, h.limb_count, h.domain));
    size_t off = header_size(h.limb_count);
    for (size_t limb = 0; limb < h.limb_count; ++limb) {
        const uint64_t prime = h.primes[limb];
        for (size_t p = 0; p < h.parts; ++p) {
            auto dst = elements[p].limb(limb);
            for (size_t j = 0; j < h.n; ++j, off += 8) {
                const uint64_t c = get_u64(body, off);
                if (c >= prime) throw WireError("coefficient not reduced below its limb prime");
                dst[j] = c;
            }
        }
    }
    return elements;
}

ParamSet params_from_header(const Header& h) {
    ParamSet ps;
    ps.scheme = h.scheme;
    ps.ring_degree_n = h.n;
    ps.modulus_limbs = h.primes;
    ps.plaintext_modulus_t = h.plaintext_modulus;
    ps.scale_log2 = h.scheme == Scheme::Ckks ? 38 : 0;
    ps.levels = h.levels;
    ps.error_stddev_sigma = h.sigma;
    ps.secure = h.secure;
    return ps;
}

}  // namespace

WireBlob serialize(const PublicKey& pk) {
    const RingElement els[] = {pk.b, pk.a};
    Bytes body = build_blob(BlobKind::PublicKey, pk.params, els,
                            static_cast<uint8_t>(pk.b.limb_count()),
                            static_cast<int16_t>(pk.params.scale_log2));
    return WireBlob{BlobKind::PublicKey, pk.params.scheme, std::move(body)};
}

WireBlob serialize(const EvalKey& ek) {
    std::vector<RingElement> els;
    for (size_t j = 0; j < ek.pair_count(); ++j) {
        els.push_back(ek.b[j]);
        els.push_back(ek.a[j]);
    }
    Bytes body = build_blob(BlobKind::EvalKey, ek.params, els,
                            static_cast<uint8_t>(els[0].limb_count()),
                            static_cast<int16_t>(ek.params.scale_log2));
    return WireBlob{BlobKind::EvalKey, ek.params.scheme, std::move(body)};
}

WireBlob serialize(const Ciphertext& ct) {
    Bytes body = build_blob(BlobKind::Ciphertext, ct.params, ct.parts,
                            static_cast<uint8_t>(ct.level), static_cast<int16_t>(ct.scale_log2));
    return WireBlob{BlobKind::Ciphertext, ct.params.scheme, std::move(body)};
}

WireObject deserialize(const WireBlob& blob) {
    const Header h = parse_header(blob.body);
    auto elements = parse_elements(blob.body, h);
    ParamSet ps = params_from_header(h);
    switch (h.kind) {
        case BlobKind::PublicKey: {
            if (elements.size() != 2) throw WireError("public key must have exactly two parts");
            return PublicKey{std::move(elements[0]), std::move(elements[1]), std::move(ps)};
        }
        case BlobKind::EvalKey: {
            if (elements.size() < 2 || elements.size() % 2 != 0)
                throw WireError("evaluation key must hold (b, a) pairs");
            EvalKey ek;
            for (size_t j = 0; j < elements.size(); j += 2) {
                ek.b.push_back(std::move(elements[j]));
                ek.a.push_back(std::move(elements[j + 1]));
            }
            ek.params = std::move(ps);
            return ek;
        }
        case BlobKind::Ciphertext: {
            if (elements.size() != 2 && elements.size() != 3)
                throw WireError("ciphertext must have 2 or 3 parts");
            Ciphertext ct;
            ct.parts = std::move(elements);
            ct.scheme = h.scheme;
            ct.level = h.level;
            ct.scale_log2 = h.scale_log2;
            ct.params = std::move(ps);
            return ct;
        }
        case BlobKind::Baseline:
            throw WireError("baseline blobs carry no HE object");
    }
    throw WireError("unreachable blob kind");
}

WireBlob make_baseline_blob(Bytes payload) {
    return WireBlob{BlobKind::Baseline, Scheme::Bfv, std::move(payload)};
}

size_t fragment_count_for(size_t size, size_t mtu) {
    if (mtu <= kFragmentHeaderSize) throw std::invalid_argument("mtu must exceed the fragment header");
    const size_t chunk = mtu - kFragmentHeaderSize;
    return (size + chunk - 1) / chunk;
}

std::vector<Fragment> fragment(const WireBlob& blob, size_t mtu) {
    if (mtu <= kFragmentHeaderSize) throw std::invalid_argument("mtu must exceed the fragment header");
    if (blob.body.empty()) throw std::invalid_argument("cannot fragment an empty blob");
    const size_t chunk = mtu - kFragmentHeaderSize;
    const size_t count = fragment_count_for(blob.body.size(), mtu);
    if (count > UINT32_MAX) throw std::invalid_argument("blob too large for 32-bit sequence numbers");

    std::vector<Fragment> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        const size_t begin = i * chunk;
        const size_t end = std::min(begin + chunk, blob.body.size());
        Fragment f;
        f.seq_index = static_cast<uint32_t>(i);
        f.total_count = static_cast<uint32_t>(count);
        f.payload.assign(blob.body.begin() + begin, blob.body.begin() + end);
        out.push_back(std::move(f));
    }
    return out;
}

Bytes encode_fragment(const Fragment& f) {
    Bytes out;
    out.reserve(kFragmentHeaderSize + f.payload.size());
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(f.seq_index >> (8 * i)));
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(f.total_count >> (8 * i)));
    out.insert(out.end(), f.payload.begin(), f.payload.end());
    return out;
}

Fragment decode_fragment(std::span<const uint8_t> datagram) {
    if (datagram.size() < kFragmentHeaderSize) throw WireError("datagram shorter than fragment header");
    Fragment f;
    for (int i = 0; i < 4; ++i) f.seq_index = (f.seq_index << 8) | datagram[i];
    for (int i = 4; i < 8; ++i) f.total_count = (f.total_count << 8) | datagram[i];
    if (f.total_count == 0 || f.seq_index >= f.total_count)
        throw WireError("fragment header indices out of range");
    f.payload.assign(datagram.begin() + kFragmentHeaderSize, datagram.end());
    return f;
}

bool Reassembler::insert(const Fragment& f) {
    if (f.total_count == 0 || f.seq_index >= f.total_count)
        throw WireError("fragment header indices out of range");
    if (total_ == 0) {
        total_ = f.total_count;
        seen_.assign(total_, false);
        parts_.assign(total_, {});
    } else if (f.total_count != total_) {
        throw WireError("inconsistent total_count across fragments");
    }
    if (seen_[f.seq_index]) return false;  // duplicate
    seen_[f.seq_index] = true;
    parts_[f.seq_index] = f.payload;
    ++received_;
    return true;
}

std::vector<uint32_t> Reassembler::missing() const {
    std::vector<uint32_t> idx;
    for (uint32_t i = 0; i < total_; ++i)
        if (!seen_[i]) idx.push_back(i);
    return idx;
}

std::vector<uint32_t> Reassembler::received_indices() const {
    std::vector<uint32_t> idx;
    for (uint32_t i = 0; i < total_; ++i)
        if (seen_[i]) idx.push_back(i);
    return idx;
}

WireBlob Reassembler::take() {
    if (!complete())
        throw ReassemblyError("reassembly incomplete: " + std::to_string(total_ - received_) +
                                  " fragment(s) missing",
                              missing());
    Bytes body;
    size_t size = 0;
    for (const auto& p : parts_) size += p.size();
    body.reserve(size);
    for (const auto& p : parts_) body.insert(body.end(), p.begin(), p.end());

    WireBlob blob;
    blob.body = std::move(body);
    if (blob.body.size() >= 7 && std::equal(std::begin(kMagic), std::end(kMagic), blob.body.begin())) {
        blob.kind = blob.body[5] <= 3 ? static_cast<BlobKind>(blob.body[5]) : BlobKind::Baseline;
        blob.scheme = blob.body[6] <= 2 ? static_cast<Scheme>(blob.body[6]) : Scheme::Bfv;
    } else {
        blob.kind = BlobKind::Baseline;
    }
    return blob;
}

WireBlob reassemble(std::span<const Fragment> fragments) {
    if (fragments.empty()) throw ReassemblyError("no fragments", {});
    Reassembler r;
    for (const Fragment& f : fragments) r.insert(f);
    return r.take();
}

}  // namespace hevx
