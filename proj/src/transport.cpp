// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstring>
#include <mutex>
#include <queue>
#include <thread>

#include "hevx/rng.hpp"

namespace hevx {

const Bytes kRttProbe = {'R', 'T', 'T', '?'};
const Bytes kRttReply = {'R', 'T', 'T', '-', 'O', 'K'};

double PacingPolicy::resolve_ms() const {
    if (kind == Kind::Fixed) return fixed_ms;
    if (measured_rtt_ms < 0)
        throw TransportError("adaptive pacing requires a measured RTT; run the probe first");
    return std::max(floor_ms, multiplier * measured_rtt_ms);
}

// ---------------------------------------------------------------------------
// UDP

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw TransportError(what + ": " + std::strerror(errno));
}

}  // namespace

UdpChannel::UdpChannel(uint16_t local_port, const std::string& peer_host, uint16_t peer_port,
                       size_t buffer_bytes) {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw_errno("socket");

    int want = static_cast<int>(buffer_bytes);
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &want, sizeof(want));
    ::setsockopt(fd_, SOL_SOCKET, SO_SNDBUF, &want, sizeof(want));
    socklen_t optlen = sizeof(granted_rcvbuf_);
    ::getsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &granted_rcvbuf_, &optlen);
    optlen = sizeof(granted_sndbuf_);
    ::getsockopt(fd_, SOL_SOCKET, SO_SNDBUF, &granted_sndbuf_, &optlen);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(local_port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        ::close(fd_);
        throw_errno("bind");
    }
    sockaddr_in bound{};
    socklen_t blen = sizeof(bound);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &blen) < 0) {
        ::close(fd_);
        throw_errno("getsockname");
    }
    local_port_ = ntohs(bound.sin_port);

    if (peer_port != 0) {
        in_addr peer{};
        if (::inet_pton(AF_INET, peer_host.c_str(), &peer) != 1) {
            ::close(fd_);
            throw TransportError("bad peer address: " + peer_host);
        }
        peer_addr_ = peer.s_addr;
        peer_port_ = htons(peer_port);
        has_peer_ = true;
    }
}

UdpChannel::~UdpChannel() {
    if (fd_ >= 0) ::close(fd_);
}

void UdpChannel::send(std::span<const uint8_t> datagram) {
    if (!has_peer_) throw TransportError("udp send: no peer known yet");
    sockaddr_in to{};
    to.sin_family = AF_INET;
    to.sin_addr.s_addr = peer_addr_;
    to.sin_port = peer_port_;
    ssize_t n = ::sendto(fd_, datagram.data(), datagram.size(), 0,
                         reinterpret_cast<sockaddr*>(&to), sizeof(to));
    if (n < 0) throw_errno("sendto");
    if (static_cast<size_t>(n) != datagram.size()) throw TransportError("sendto: short write");
}

std::optional<Bytes> UdpChannel::recv(double timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    int timeout = timeout_ms <= 0 ? 0 : static_cast<int>(std::ceil(timeout_ms));
    int r = ::poll(&pfd, 1, timeout);
    if (r < 0) throw_errno("poll");
    if (r == 0) return std::nullopt;

    Bytes buf(65536);
    sockaddr_in from{};
    socklen_t flen = sizeof(from);
    ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&from), &flen);
    if (n < 0) throw_errno("recvfrom");
    buf.resize(static_cast<size_t>(n));
    // learn the peer from inbound traffic so replies work without config
    peer_addr_ = from.sin_addr.s_addr;
    peer_port_ = from.sin_port;
    has_peer_ = true;
    return buf;
}

std::string UdpChannel::describe() const {
    return "udp port " + std::to_string(local_port_) + " rcvbuf " + std::to_string(granted_rcvbuf_) +
           " sndbuf " + std::to_string(granted_sndbuf_);
}

// ---------------------------------------------------------------------------
// Simulated channel

namespace {

struct SimMessage {
    TimePoint deliver_at;
    uint64_t order;  // FIFO tiebreak for equal delivery times
    Bytes data;
    bool operator>(const SimMessage& other) const {
        if (deliver_at != other.deliver_at) return deliver_at > other.deliver_at;
        return order > other.order;
    }
};

struct SimDirection {
    std::mutex mu;
    std::condition_variable cv;
    std::priority_queue<SimMessage, std::vector<SimMessage>, std::greater<>> queue;
    uint64_t next_order = 0;
};

struct SimShared {
    SimParams params;
    SimDirection dir[2];  // dir[i]: messages travelling towards endpoint i
    std::mutex rng_mu;
    Rng rng;
    explicit SimShared(const SimParams& p, uint64_t seed) : params(p), rng(seed) {}
};

class SimChannel final : public Channel {
public:
    SimChannel(std::shared_ptr<SimShared> shared, int side) : shared_(std::move(shared)), side_(side) {}

    void send(std::span<const uint8_t> datagram) override {
        auto& s = *shared_;
        int deliveries = 1;
        double delay_ms = 0.0;
        {
            std::scoped_lock lock(s.rng_mu);
            if (s.rng.uniform_real() < s.params.loss_probability) deliveries = 0;
            else if (s.params.duplicate_probability > 0 &&
                     s.rng.uniform_real() < s.params.duplicate_probability)
                deliveries = 2;
            if (deliveries > 0) {
                double jitter = 0.0;
                if (s.params.jitter_stddev_ms > 0) {
                    // Box-Muller; deterministic under the channel seed
                    double u1 = std::max(s.rng.uniform_real(), 1e-300);
                    double u2 = s.rng.uniform_real();
                    jitter = s.params.jitter_stddev_ms *
                             std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::acos(-1.0) * u2);
                }
                delay_ms = std::max(0.0, s.params.one_way_latency_ms + jitter);
            }
        }
        if (deliveries == 0) return;
        SimDirection& d = s.dir[1 - side_];
        const TimePoint at = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                std::chrono::duration<double, std::milli>(delay_ms));
        std::scoped_lock lock(d.mu);
        for (int i = 0; i < deliveries; ++i)
            d.queue.push(SimMessage{at, d.next_order++, Bytes(datagram.begin(), datagram.end())});
        d.cv.notify_all();
    }

    std::optional<Bytes> recv(double timeout_ms) override {
        SimDirection& d = shared_->dir[side_];
        const TimePoint deadline =
            Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double, std::milli>(std::max(0.0, timeout_ms)));
        std::unique_lock lock(d.mu);
        for (;;) {
            const TimePoint now = Clock::now();
            if (!d.queue.empty() && d.queue.top().deliver_at <= now) {
                Bytes data = d.queue.top().data;
                d.queue.pop();
                return data;
            }
            TimePoint wake = deadline;
            if (!d.queue.empty()) wake = std::min(wake, d.queue.top().deliver_at);
            if (now >= deadline) return std::nullopt;
            d.cv.wait_until(lock, wake);
        }
    }

    std::string describe() const override { return "sim channel side " + std::to_string(side_); }

private:
    std::shared_ptr<SimShared> shared_;
    int side_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_sim_pair(const SimParams& sim,
                                                                            uint64_t seed) {
    auto shared = std::make_shared<SimShared>(sim, seed);
    return {std::make_unique<SimChannel>(shared, 0), std::make_unique<SimChannel>(shared, 1)};
}

// ---------------------------------------------------------------------------
// Blob transfer

SendReport send_blob(Channel& ch, const WireBlob& blob, const PacingPolicy& pacing, size_t mtu) {
    SendReport report;

    const TimePoint frag_start = Clock::now();
    const std::vector<Fragment> frags = fragment(blob, mtu);
    std::vector<Bytes> datagrams;
    datagrams.reserve(frags.size());
    for (const Fragment& f : frags) datagrams.push_back(encode_fragment(f));
    report.frag_ms = ms_between(frag_start, Clock::now());

    const double pace_ms = pacing.resolve_ms();
    const auto pace = std::chrono::duration<double, std::milli>(pace_ms);

    const TimePoint start = Clock::now();
    for (size_t i = 0; i < datagrams.size(); ++i) {
        if (i > 0 && pace_ms > 0)
            std::this_thread::sleep_until(start + std::chrono::duration_cast<Clock::duration>(pace * double(i)));
        if (i == 0) report.first_send = Clock::now();
        ch.send(datagrams[i]);
        report.bytes_sent += datagrams[i].size();
    }
    report.last_send = Clock::now();
    report.fragments_sent = datagrams.size();
    report.wall_ms = ms_between(report.first_send, report.last_send);
    return report;
}

std::pair<WireBlob, RecvReport> recv_blob(Channel& ch, double recv_timeout_ms, bool echo_probes) {
    RecvReport report;
    Reassembler reasm;
    for (;;) {
        auto datagram = ch.recv(recv_timeout_ms);
        if (!datagram) {
            throw TransportTimeout("receive timeout after " + std::to_string(recv_timeout_ms) +
                                       " ms between fragments (" +
                                       std::to_string(reasm.received_count()) + " fragment(s) held)",
                                   reasm.received_indices());
        }
        if (echo_probes && *datagram == kRttProbe) {
            ch.send(kRttReply);
            continue;
        }
        const TimePoint arrival = Clock::now();
        if (report.fragments_received == 0) report.first_arrival = arrival;
        report.last_arrival = arrival;
        ++report.fragments_received;
        report.bytes_received += datagram->size();

        const TimePoint work_start = Clock::now();
        reasm.insert(decode_fragment(*datagram));
        report.reasm_ms += ms_between(work_start, Clock::now());
        if (reasm.complete()) {
            const TimePoint final_start = Clock::now();
            WireBlob blob = reasm.take();
            report.reasm_ms += ms_between(final_start, Clock::now());
            return {std::move(blob), std::move(report)};
        }
    }
}

double measure_rtt_probe(Channel& ch, double timeout_ms) {
    const TimePoint start = Clock::now();
    ch.send(kRttProbe);
    const TimePoint deadline = start + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double, std::milli>(timeout_ms));
    for (;;) {
        const double remaining = ms_between(Clock::now(), deadline);
        if (remaining <= 0) throw TransportTimeout("rtt probe: no reply from peer", {});
        auto datagram = ch.recv(remaining);
        if (!datagram) throw TransportTimeout("rtt probe: no reply from peer", {});
        if (*datagram == kRttReply) return ms_between(start, Clock::now());
        // other traffic; keep waiting
    }
}

void drain_channel(Channel& ch) {
    while (ch.recv(0.0)) {
    }
}

}  // namespace hevx
