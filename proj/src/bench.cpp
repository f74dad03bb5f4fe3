// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/bench.hpp"

#include <iostream>
#include <sstream>

namespace hevx {

namespace {

std::string config_line(const BenchConfig& cfg) {
    std::ostringstream os;
    os << "hevx bench scheme=" << cfg.scenario.scheme_id
       << " scenario=" << scenario_name(cfg.scenario.scenario)
       << " vehicles=" << cfg.scenario.vehicle_count << " trials=" << cfg.scenario.trials
       << " seed=" << cfg.scenario.seed << " profile=" << cfg.profile_name
       << " channel=" << (cfg.channel.mode == ChannelMode::Socket ? "socket" : "sim")
       << " mtu=" << cfg.channel.mtu << " timeout_ms=" << cfg.channel.recv_timeout_ms;
    if (cfg.pacing.kind == PacingPolicy::Kind::Fixed)
        os << " pace_ms=" << cfg.pacing.fixed_ms;
    else
        os << " pace=adaptive_x" << cfg.pacing.multiplier << " pace_floor_ms=" << cfg.pacing.floor_ms;
    if (cfg.channel.mode == ChannelMode::Simulated)
        os << " sim_latency_ms=" << cfg.channel.sim.one_way_latency_ms
           << " sim_jitter_ms=" << cfg.channel.sim.jitter_stddev_ms
           << " sim_loss=" << cfg.channel.sim.loss_probability;
    if (cfg.scenario.presence_probability != 1.0)
        os << " presence_p=" << cfg.scenario.presence_probability;
    return os.str();
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
    BenchResult result;
    result.info.scheme_id = cfg.scenario.scheme_id;
    result.info.scenario = scenario_name(cfg.scenario.scenario);
    result.info.vehicles = cfg.scenario.vehicle_count;
    result.info.medium_profile = cfg.profile_name;
    result.info.seed = cfg.scenario.seed;
    result.info.config_line = config_line(cfg);

    result.outcomes = run_trials(cfg.scenario, cfg.channel, cfg.pacing);

    result.all_verified = true;
    for (const TrialOutcome& out : result.outcomes) {
        if (out.sender.ok && out.receiver.ok) result.completed.push_back(out.merged);
        if (!out.verified) {
            result.all_verified = false;
            if (result.first_failure.empty())
                result.first_failure = "trial " + std::to_string(out.merged.trial_index) + ": " +
                                       (out.error.empty() ? "unverified" : out.error);
        }
    }

    if (!result.completed.empty()) {
        result.summary = summarize(result.completed);
        if (!cfg.csv_path.empty()) emit_csv(result.summary, result.completed, result.info, cfg.csv_path);
        if (!cfg.quiet) print_summary(std::cout, result.info, result.summary);
    } else if (!cfg.quiet) {
        std::cout << "no completed trials: " << result.first_failure << "\n";
    }
    if (!cfg.quiet && !result.all_verified)
        std::cout << "VERIFICATION FAILED: " << result.first_failure << "\n";
    return result;
}

}  // namespace hevx
