// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_BENCH_HPP
#define HEVX_BENCH_HPP

#include <string>
#include <vector>

#include "hevx/metrics.hpp"
#include "hevx/scenarios.hpp"

namespace hevx {

struct BenchConfig {
    ScenarioConfig scenario;
    ChannelConfig channel;
    PacingPolicy pacing = PacingPolicy::fixed(100.0);
    std::string profile_name = "loopback";
    std::string csv_path;  // empty: skip the CSV
    bool quiet = false;
};

struct BenchResult {
    std::vector<TrialOutcome> outcomes;
    std::vector<TrialMetrics> completed;  // merged metrics of completed trials
    Summary summary;
    RunInfo info;
    bool all_verified = false;
    std::string first_failure;
};

/// Drive the full workflow: spawn both sessions over the configured channel,
/// run the trials, verify every decryption against ground truth, summarize,
/// optionally write the CSV and print the summary table.
BenchResult run_bench(const BenchConfig& cfg);

}  // namespace hevx

#endif
