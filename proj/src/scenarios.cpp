// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/scenarios.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "hevx/rng.hpp"
#include "hevx/schemes.hpp"
#include "hevx/wire.hpp"

namespace hevx {

namespace {

// Substream ids for per-trial seed derivation.
constexpr uint64_t kStreamSenderCrypto = 1;
constexpr uint64_t kStreamReceiverCrypto = 2;
constexpr uint64_t kStreamSenderValue = 3;
constexpr uint64_t kStreamReceiverValues = 4;

class ScopedTimer {
public:
    explicit ScopedTimer(double& out) : out_(out), start_(Clock::now()) {}
    ~ScopedTimer() { out_ += ms_between(start_, Clock::now()); }

private:
    double& out_;
    TimePoint start_;
};

double slot0(const Plaintext& pt) {
    const auto& rv = std::get<PlainRealVector>(pt);
    if (rv.values.empty()) throw std::runtime_error("decrypted vector is empty");
    return rv.values[0];
}

Plaintext make_plaintext(const ScenarioConfig& cfg, const ParamSet& ps, double value) {
    if (ps.scheme == Scheme::Ckks) {
        // Scalar replicated across all n/2 slots; slot 0 is read back.
        std::vector<double> slots(ps.ring_degree_n / 2, value);
        return PlainRealVector{std::move(slots), ps.scale_log2};
    }
    const auto as_int = static_cast<uint64_t>(std::llround(value));
    if (cfg.scenario != ScenarioKind::Count)
        throw std::invalid_argument("integer schemes only support the count scenario");
    return PlainInteger{as_int};
}

void require_params_match(const ParamSet& got, const ParamSet& want) {
    if (got.scheme != want.scheme)
        throw std::runtime_error(std::string("scheme mismatch: key is ") + scheme_name(got.scheme) +
                                 ", configured " + scheme_name(want.scheme));
    if (got.ring_degree_n != want.ring_degree_n || got.modulus_limbs != want.modulus_limbs)
        throw std::runtime_error("received key parameters do not match the configured preset");
}

}  // namespace

const char* scenario_name(ScenarioKind k) {
    return k == ScenarioKind::Count ? "count" : "avg";
}

void check_scenario_config(const ScenarioConfig& cfg) {
    if (cfg.vehicle_count < 2) throw std::invalid_argument("vehicle_count must be >= 2");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (cfg.presence_probability < 0 || cfg.presence_probability > 1)
        throw std::invalid_argument("presence_probability must be in [0, 1]");
    if (cfg.speed_low > cfg.speed_high) throw std::invalid_argument("speed range is inverted");
    if (cfg.scenario == ScenarioKind::AverageSpeed) {
        if (cfg.params.scheme != Scheme::Ckks || cfg.params.levels < 2)
            throw std::invalid_argument(
                "the average-speed scenario needs CKKS with a multiplicative level (levels = 2)");
    }
    auto violations = validate(cfg.params);
    if (!violations.empty()) throw std::invalid_argument("invalid parameters: " + violations.front());
    if (!cfg.params.secure && !cfg.allow_insecure)
        throw std::invalid_argument("insecure parameters refused without explicit opt-in");
}

SimulatedInputs simulate_inputs(const ScenarioConfig& cfg, int trial) {
    SimulatedInputs in;
    Rng sender_rng(derive_seed(cfg.seed, static_cast<uint64_t>(trial), kStreamSenderValue));
    Rng recv_rng(derive_seed(cfg.seed, static_cast<uint64_t>(trial), kStreamReceiverValues));

    if (cfg.scenario == ScenarioKind::Count) {
        in.sender_value = 1.0;  // the reporting vehicle is in the zone
        double total = in.sender_value;
        for (int i = 1; i < cfg.vehicle_count; ++i) {
            const double bit = recv_rng.bernoulli(cfg.presence_probability) ? 1.0 : 0.0;
            in.receiver_values.push_back(bit);
            total += bit;
        }
        in.ground_truth = total;
    } else {
        in.sender_value = sender_rng.uniform_real(cfg.speed_low, cfg.speed_high);
        double total = in.sender_value;
        for (int i = 1; i < cfg.vehicle_count; ++i) {
            const double speed = recv_rng.uniform_real(cfg.speed_low, cfg.speed_high);
            in.receiver_values.push_back(speed);
            total += speed;
        }
        in.ground_truth = total / cfg.vehicle_count;
    }
    return in;
}

double scenario_tolerance(const ScenarioConfig& cfg) {
    if (cfg.scenario == ScenarioKind::AverageSpeed) return 0.05;
    return cfg.params.scheme == Scheme::Ckks ? 1e-2 : 0.0;
}

ScenarioResult sender_session(const ScenarioConfig& cfg, Channel& ch, const PacingPolicy& pacing,
                              const ChannelConfig& channel_cfg, int trial) {
    check_scenario_config(cfg);
    ScenarioResult res;
    const SimulatedInputs inputs = simulate_inputs(cfg, trial);
    res.ground_truth = inputs.ground_truth;
    res.metrics.trial_index = trial;

    PacingPolicy pace = pacing;
    if (pace.kind == PacingPolicy::Kind::AdaptiveRtt)
        pace.measured_rtt_ms = measure_rtt_probe(ch, channel_cfg.recv_timeout_ms);

    Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(trial), kStreamSenderCrypto));
    KeyBundle keys = keygen(cfg.params, rng, cfg.allow_insecure);

    // Key distribution: in-band, but outside the RTT measurement window.
    send_blob(ch, serialize(keys.pub), pace, channel_cfg.mtu);
    if (cfg.scenario == ScenarioKind::AverageSpeed)
        send_blob(ch, serialize(*keys.eval), pace, channel_cfg.mtu);

    Ciphertext own_ct;
    {
        ScopedTimer t(res.metrics.encrypt_ms);
        own_ct = encrypt(keys.pub, make_plaintext(cfg, cfg.params, inputs.sender_value), rng);
    }

    const SendReport sent = send_blob(ch, serialize(own_ct), pace, channel_cfg.mtu);
    res.metrics.frag_ms += sent.frag_ms;
    res.metrics.fragments_total = sent.fragments_sent;
    res.metrics.bytes_sent = sent.bytes_sent;

    auto [result_blob, rr] = recv_blob(ch, channel_cfg.recv_timeout_ms, /*echo_probes=*/true);
    res.metrics.rtt_ms = ms_between(sent.first_send, rr.last_arrival);
    res.metrics.reasm_ms += rr.reasm_ms;
    res.metrics.bytes_received = rr.bytes_received;

    const auto obj = deserialize(result_blob);
    const auto* aggregate = std::get_if<Ciphertext>(&obj);
    if (aggregate == nullptr) throw std::runtime_error("expected a ciphertext result blob");

    Plaintext pt;
    {
        ScopedTimer t(res.metrics.decrypt_ms);
        pt = decrypt(keys.secret, *aggregate);
    }

    if (cfg.params.scheme == Scheme::Ckks) res.decrypted_value = slot0(pt);
    else res.decrypted_value = static_cast<double>(std::get<PlainInteger>(pt).value);

    if (cfg.scenario == ScenarioKind::Count)
        res.plaintext_average = res.decrypted_value / cfg.vehicle_count;

    res.metrics.comm_latency_ms = res.metrics.rtt_ms;  // receiver hom time folded in at merge
    res.ok = true;
    return res;
}

ScenarioResult receiver_session(const ScenarioConfig& cfg, Channel& ch, const PacingPolicy& pacing,
                                const ChannelConfig& channel_cfg, int trial) {
    check_scenario_config(cfg);
    ScenarioResult res;
    res.ground_truth = std::numeric_limits<double>::quiet_NaN();  // not this party's knowledge
    res.metrics.trial_index = trial;

    auto [pk_blob, pk_rr] = recv_blob(ch, channel_cfg.recv_timeout_ms, /*echo_probes=*/true);
    const auto pk_obj = deserialize(pk_blob);
    const auto* pk = std::get_if<PublicKey>(&pk_obj);
    if (pk == nullptr) throw std::runtime_error("expected a public key blob first");
    require_params_match(pk->params, cfg.params);

    std::optional<EvalKey> ek;
    if (cfg.scenario == ScenarioKind::AverageSpeed) {
        auto [ek_blob, ek_rr] = recv_blob(ch, channel_cfg.recv_timeout_ms, /*echo_probes=*/true);
        const auto ek_obj = deserialize(ek_blob);
        const auto* k = std::get_if<EvalKey>(&ek_obj);
        if (k == nullptr) throw std::runtime_error("expected an evaluation key blob");
        require_params_match(k->params, cfg.params);
        ek = *k;
    }

    auto [ct_blob, ct_rr] = recv_blob(ch, channel_cfg.recv_timeout_ms, /*echo_probes=*/true);
    res.metrics.reasm_ms += ct_rr.reasm_ms;
    res.metrics.bytes_received = ct_rr.bytes_received;
    const auto ct_obj = deserialize(ct_blob);
    const auto* sender_ct = std::get_if<Ciphertext>(&ct_obj);
    if (sender_ct == nullptr) throw std::runtime_error("expected the sender ciphertext blob");
    if (sender_ct->scheme != cfg.params.scheme)
        throw std::runtime_error("ciphertext scheme does not match the configured preset");

    // Simulated fleet, encrypted under the received public key. Encryption is
    // deliberately outside the homomorphic-op timer.
    const SimulatedInputs inputs = simulate_inputs(cfg, trial);
    Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(trial), kStreamReceiverCrypto));
    std::vector<Ciphertext> fleet;
    fleet.reserve(inputs.receiver_values.size());
    for (double v : inputs.receiver_values)
        fleet.push_back(encrypt(*pk, make_plaintext(cfg, pk->params, v), rng));

    std::optional<Ciphertext> inverse_count;
    if (cfg.scenario == ScenarioKind::AverageSpeed) {
        const double inv = 1.0 / static_cast<double>(cfg.vehicle_count);
        inverse_count = encrypt(*pk, make_plaintext(cfg, pk->params, inv), rng);
    }

    Ciphertext acc = *sender_ct;
    {
        ScopedTimer t(res.metrics.hom_op_ms);
        for (const Ciphertext& ct : fleet) {
            acc = he_add(acc, ct);
            ++res.adds_performed;
        }
        if (inverse_count) {
            acc = he_mul_ckks(acc, *inverse_count, *ek);
            ++res.muls_performed;
        }
    }

    PacingPolicy pace = pacing;
    if (pace.kind == PacingPolicy::Kind::AdaptiveRtt)
        pace.measured_rtt_ms = measure_rtt_probe(ch, channel_cfg.recv_timeout_ms);

    const SendReport sent = send_blob(ch, serialize(acc), pace, channel_cfg.mtu);
    res.metrics.frag_ms += sent.frag_ms;
    res.metrics.bytes_sent = sent.bytes_sent;
    res.metrics.fragments_total = ct_rr.fragments_received;

    res.decrypted_value = std::numeric_limits<double>::quiet_NaN();  // cannot decrypt, by construction
    res.ok = true;
    return res;
}

std::vector<TrialOutcome> run_trials(const ScenarioConfig& cfg, const ChannelConfig& channel_cfg,
                                     const PacingPolicy& pacing) {
    check_scenario_config(cfg);

    std::unique_ptr<Channel> recv_ch;
    std::unique_ptr<Channel> send_ch;
    if (channel_cfg.mode == ChannelMode::Simulated) {
        auto [a, b] = make_sim_pair(channel_cfg.sim, derive_seed(cfg.seed, 0, 99));
        send_ch = std::move(a);
        recv_ch = std::move(b);
    } else {
        auto receiver = std::make_unique<UdpChannel>(channel_cfg.port, "", 0, channel_cfg.socket_buffer_bytes);
        send_ch = std::make_unique<UdpChannel>(0, channel_cfg.peer_host, receiver->local_port(),
                                               channel_cfg.socket_buffer_bytes);
        recv_ch = std::move(receiver);
    }

    std::vector<TrialOutcome> outcomes;
    outcomes.reserve(cfg.trials);
    const double tolerance = scenario_tolerance(cfg);

    for (int trial = 0; trial < cfg.trials; ++trial) {
        drain_channel(*recv_ch);
        drain_channel(*send_ch);

        TrialOutcome out;
        std::thread receiver_thread([&] {
            try {
                out.receiver = receiver_session(cfg, *recv_ch, pacing, channel_cfg, trial);
            } catch (const std::exception& e) {
                out.receiver.ok = false;
                out.receiver.error = e.what();
            }
        });
        try {
            out.sender = sender_session(cfg, *send_ch, pacing, channel_cfg, trial);
        } catch (const std::exception& e) {
            out.sender.ok = false;
            out.sender.error = e.what();
        }
        receiver_thread.join();

        if (!out.sender.ok || !out.receiver.ok) {
            out.verified = false;
            out.error = !out.sender.ok ? "sender: " + out.sender.error : "receiver: " + out.receiver.error;
            outcomes.push_back(std::move(out));
            continue;
        }

        out.merged = out.sender.metrics;
        out.merged.hom_op_ms = out.receiver.metrics.hom_op_ms;
        out.merged.frag_ms += out.receiver.metrics.frag_ms;
        out.merged.reasm_ms += out.receiver.metrics.reasm_ms;
        out.merged.comm_latency_ms = out.merged.rtt_ms - out.merged.hom_op_ms;

        const double diff = std::abs(out.sender.decrypted_value - out.sender.ground_truth);
        out.verified = tolerance == 0.0
                           ? std::llround(out.sender.decrypted_value) ==
                                 std::llround(out.sender.ground_truth) && diff < 0.5
                           : diff <= tolerance;
        if (!out.verified)
            out.error = "decrypted " + std::to_string(out.sender.decrypted_value) + " vs ground truth " +
                        std::to_string(out.sender.ground_truth);
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

}  // namespace hevx
