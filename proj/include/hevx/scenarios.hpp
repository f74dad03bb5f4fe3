// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_SCENARIOS_HPP
#define HEVX_SCENARIOS_HPP

#include <optional>
#include <string>
#include <vector>

#include "hevx/metrics.hpp"
#include "hevx/params.hpp"
#include "hevx/transport.hpp"

namespace hevx {

enum class ScenarioKind : uint8_t { Count = 0, AverageSpeed = 1 };

const char* scenario_name(ScenarioKind k);

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Count;
    std::string scheme_id = "bfv-add";
    ParamSet params;
    int vehicle_count = 50;
    int trials = 20;
    double speed_low = 40.0;
    double speed_high = 60.0;
    double presence_probability = 1.0;
    uint64_t seed = 1;
    bool allow_insecure = false;
};

/// Throws std::invalid_argument when the configuration violates its
/// invariants (vehicle_count >= 2, AverageSpeed needs a depth-capable CKKS
/// parameter set, ...).
void check_scenario_config(const ScenarioConfig& cfg);

/// Plaintext inputs for one trial, derived deterministically from
/// (cfg.seed, trial). Ground truth is harness-side knowledge only.
struct SimulatedInputs {
    double sender_value = 0;
    std::vector<double> receiver_values;  // vehicle_count - 1 entries
    double ground_truth = 0;              // count or mean over all vehicles
};
SimulatedInputs simulate_inputs(const ScenarioConfig& cfg, int trial);

struct ScenarioResult {
    bool ok = false;
    std::string error;
    double decrypted_value = 0;
    double ground_truth = 0;
    std::optional<double> plaintext_average;  // count scenario: value / N
    int adds_performed = 0;
    int muls_performed = 0;
    TrialMetrics metrics;  // this session's own view
};

/// Vehicle role: generates keys, ships them, encrypts its value, sends the
/// ciphertext, receives and decrypts the aggregate. Key transfer stays out
/// of the RTT window.
ScenarioResult sender_session(const ScenarioConfig& cfg, Channel& ch, const PacingPolicy& pacing,
                              const ChannelConfig& channel_cfg, int trial);

/// RSU role: receives keys and the sender ciphertext, encrypts simulated
/// vehicles under the received public key, folds vehicle_count - 1 additions
/// (plus one multiplication for averaging), returns the result. Never holds
/// decryption capability; nothing on the wire can carry one.
ScenarioResult receiver_session(const ScenarioConfig& cfg, Channel& ch, const PacingPolicy& pacing,
                                const ChannelConfig& channel_cfg, int trial);

/// Verification tolerance: 0 means exact integer equality.
double scenario_tolerance(const ScenarioConfig& cfg);

struct TrialOutcome {
    ScenarioResult sender;
    ScenarioResult receiver;
    TrialMetrics merged;
    bool verified = false;
    std::string error;
};

/// Run cfg.trials sequential trials over a fresh channel pair (loopback UDP
/// or simulated per channel_cfg.mode). Individual trial failures are
/// recorded and the remaining trials continue.
std::vector<TrialOutcome> run_trials(const ScenarioConfig& cfg, const ChannelConfig& channel_cfg,
                                     const PacingPolicy& pacing);

}  // namespace hevx

#endif
