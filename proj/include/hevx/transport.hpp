// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_TRANSPORT_HPP
#define HEVX_TRANSPORT_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hevx/wire.hpp"

namespace hevx {

using Clock = std::chrono::steady_clock;
using TimePoint = Clock::time_point;

inline double ms_between(TimePoint a, TimePoint b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inter-fragment timeout, reported with what did arrive.
class TransportTimeout : public TransportError {
public:
    TransportTimeout(const std::string& what, std::vector<uint32_t> received)
        : TransportError(what), received_indices(std::move(received)) {}
    std::vector<uint32_t> received_indices;
};

enum class ChannelMode : uint8_t { Socket = 0, Simulated = 1 };

struct SimParams {
    double one_way_latency_ms = 0.0;
    double jitter_stddev_ms = 0.0;
    double loss_probability = 0.0;
    double duplicate_probability = 0.0;
};

struct ChannelConfig {
    ChannelMode mode = ChannelMode::Socket;
    size_t mtu = 1400;
    double pace_ms = 100.0;          // default inter-fragment delay (wired profile)
    double recv_timeout_ms = 5000.0; // between consecutive fragments
    size_t socket_buffer_bytes = 4 << 20;
    uint16_t port = 40400;           // receiver bind port; 0 = ephemeral
    std::string peer_host = "127.0.0.1";
    SimParams sim;
};

/// Fixed delay, or a multiple of a measured probe RTT with a floor.
struct PacingPolicy {
    enum class Kind : uint8_t { Fixed, AdaptiveRtt } kind = Kind::Fixed;
    double fixed_ms = 100.0;
    double multiplier = 1.2;
    double floor_ms = 1.0;
    double measured_rtt_ms = -1.0;  // filled by a probe before sending

    static PacingPolicy fixed(double ms) { return PacingPolicy{Kind::Fixed, ms, 1.2, 1.0, -1.0}; }
    static PacingPolicy adaptive(double multiplier, double floor_ms) {
        return PacingPolicy{Kind::AdaptiveRtt, 0.0, multiplier, floor_ms, -1.0};
    }
    double resolve_ms() const;
};

/// Bidirectional datagram endpoint. One sender session and one receiver
/// session may use the two ends concurrently; each end is single-owner.
class Channel {
public:
    virtual ~Channel() = default;
    virtual void send(std::span<const uint8_t> datagram) = 0;
    /// nullopt on timeout. timeout_ms <= 0 polls without blocking.
    virtual std::optional<Bytes> recv(double timeout_ms) = 0;
    virtual std::string describe() const = 0;
};

/// Real UDP socket. With no fixed peer the channel replies to the source of
/// the last received datagram. Requests 4 MB socket buffers; the granted
/// sizes are reported by describe().
class UdpChannel final : public Channel {
public:
    /// Binds local_port (0 = ephemeral). peer_port 0 leaves the peer unset.
    UdpChannel(uint16_t local_port, const std::string& peer_host, uint16_t peer_port,
               size_t buffer_bytes);
    ~UdpChannel() override;
    UdpChannel(const UdpChannel&) = delete;
    UdpChannel& operator=(const UdpChannel&) = delete;

    void send(std::span<const uint8_t> datagram) override;
    std::optional<Bytes> recv(double timeout_ms) override;
    std::string describe() const override;

    uint16_t local_port() const { return local_port_; }
    int granted_rcvbuf() const { return granted_rcvbuf_; }

private:
    int fd_ = -1;
    uint16_t local_port_ = 0;
    int granted_rcvbuf_ = 0;
    int granted_sndbuf_ = 0;
    bool has_peer_ = false;
    uint32_t peer_addr_ = 0;
    uint16_t peer_port_ = 0;
};

/// In-process lossy channel: each datagram is independently delayed by
/// max(0, latency + N(0, jitter)), dropped with loss_probability, and
/// duplicated with duplicate_probability. Reordering emerges from jitter.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_sim_pair(const SimParams& sim,
                                                                            uint64_t seed);

struct SendReport {
    size_t fragments_sent = 0;
    double frag_ms = 0.0;  // fragmentation work only
    double wall_ms = 0.0;  // first send to last send
    size_t bytes_sent = 0;
    TimePoint first_send{};
    TimePoint last_send{};
};

struct RecvReport {
    double reasm_ms = 0.0;  // reassembly work only, excludes waiting
    size_t fragments_received = 0;
    size_t bytes_received = 0;
    TimePoint first_arrival{};
    TimePoint last_arrival{};
};

/// Emit all fragments of a blob in sequence order with the policy's delay
/// between consecutive sends.
SendReport send_blob(Channel& ch, const WireBlob& blob, const PacingPolicy& pacing, size_t mtu);

/// Block until one complete blob arrives. The inter-fragment timeout resets
/// on every arrival. When echo_probes is set, RTT probe datagrams are
/// answered inline instead of being treated as fragments.
std::pair<WireBlob, RecvReport> recv_blob(Channel& ch, double recv_timeout_ms, bool echo_probes = false);

/// 4-byte probe, 6-byte reply (the unencrypted baseline exchange).
extern const Bytes kRttProbe;
extern const Bytes kRttReply;

/// Round-trip time of the probe exchange against a peer in echo mode.
double measure_rtt_probe(Channel& ch, double timeout_ms);

/// Drain any queued datagrams (between benchmark trials).
void drain_channel(Channel& ch);

}  // namespace hevx

#endif
